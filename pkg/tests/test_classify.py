import numpy as np
import pytest
from conftest import unit
from test_models import seeded_instances

from dea.classify import (
    FarrellClass,
    LpSolveCounts,
    OrientedClass,
    ParetoClass,
    classify_all_rdse_pareto,
    classify_all_unified,
    classify_pareto_translated,
    classify_rdse_farrell,
    classify_rdse_pareto,
    classify_three_pass,
    classify_unified,
    cross_validate,
    expected_three_pass_counts,
    lift_dominating_point,
    membership_sets,
    reconstruct_dominator,
    verify_membership,
)
from dea.models import build_unified, solve_unified
from util.core import Dataset, strongly_pareto_dominates, weakly_pareto_dominates
from util.errors import PreconditionError
from util.sampling import random_dataset

E, EP, WE, NW, NN, NA = (
    OrientedClass.E,
    OrientedClass.EPRIME,
    OrientedClass.WE,
    OrientedClass.NW,
    OrientedClass.NN,
    OrientedClass.NOT_APPLICABLE,
)

TABLE3 = {
    "A": (E, E),
    "B": (E, E),
    "C": (E, E),
    "D": (EP, EP),
    "E": (NW, NW),
    "F": (WE, NW),
    "G": (NW, WE),
    "H": (NN, NN),
}

TABLE6 = {
    "A": ParetoClass.WEP,
    "B": ParetoClass.E,
    "C": ParetoClass.E,
    "D": ParetoClass.EPRIME,
    "E": ParetoClass.E,
    "F": ParetoClass.WEP,
    "G": ParetoClass.NEP,
    "H": ParetoClass.NEP,
}


def _labels(classifications):
    return {c.name: (c.input, c.output) for c in classifications}


class TestUnifiedRoute:
    def test_oriented_pattern(self, table1):
        assert _labels(classify_all_unified(table1)) == TABLE3

    def test_single_units(self, table1):
        g = classify_unified(table1, unit(table1, "G"))
        assert (g.input, g.output, g.pareto) == (NW, WE, ParetoClass.WEP)
        h = classify_unified(table1, unit(table1, "H"))
        assert (h.input, h.output, h.pareto) == (NN, NN, ParetoClass.NEP)

    def test_negative_data_pattern(self, table4):
        results = classify_all_unified(table4)
        assert {c.name: c.pareto for c in results} == TABLE6
        assert all(c.input is NA and c.output is NA for c in results)

    def test_single_unit(self, single):
        (only,) = classify_all_unified(single)
        assert (only.pareto, only.input, only.output) == (ParetoClass.E, E, E)

    def test_thread_pool_keeps_order(self, table1):
        assert classify_all_unified(table1, workers=3) == classify_all_unified(table1)

    def test_strong_efficiency_is_orientation_free(self):
        for ds in seeded_instances(60, seed=11):
            for c in classify_all_unified(ds):
                strong = {E, EP}
                assert (c.input in strong) == (c.output in strong) == c.strongly_efficient


class TestRdseRoutes:
    def test_farrell_input(self, table1):
        assert classify_rdse_farrell(table1, unit(table1, "F"), "input") is FarrellClass.WE
        assert classify_rdse_farrell(table1, unit(table1, "E"), "input") is FarrellClass.NE

    def test_farrell_output(self, table1):
        assert classify_rdse_farrell(table1, unit(table1, "G"), "output") is FarrellClass.WE
        assert classify_rdse_farrell(table1, unit(table1, "F"), "output") is FarrellClass.NE

    def test_farrell_twins(self, twins):
        assert classify_rdse_farrell(twins, 0, "input") is FarrellClass.EPRIME

    def test_farrell_needs_nonnegative_data(self, table4):
        with pytest.raises(PreconditionError):
            classify_rdse_farrell(table4, 0, "input")

    def test_pareto(self, table1, table4):
        assert classify_rdse_pareto(table4, unit(table4, "A")) is ParetoClass.WEP
        assert classify_rdse_pareto(table4, unit(table4, "E")) is ParetoClass.E
        assert classify_rdse_pareto(table1, unit(table1, "H")) is ParetoClass.NEP

    def test_pareto_routes_on_negative_data(self, table4):
        labels, counts = classify_all_rdse_pareto(table4)
        assert dict(zip(table4.names, labels)) == TABLE6
        assert counts.stage_one == table4.n
        assert dict(zip(table4.names, classify_pareto_translated(table4))) == TABLE6

    def test_translated_data_keeps_pareto_labels(self, table4):
        shifted = table4.translated([7], [4])
        assert {c.name: c.pareto for c in classify_all_unified(shifted)} == TABLE6

    def test_extreme_efficiency_equivalence(self):
        for ds in seeded_instances(40, seed=5):
            for o in range(ds.n):
                extreme = not solve_unified(ds, o).feasible
                assert (classify_rdse_farrell(ds, o, "input") is FarrellClass.E) == extreme
                assert (classify_rdse_pareto(ds, o) is ParetoClass.E) == extreme


class TestThreePass:
    def test_matches_unified_on_example(self, table1):
        three, counts = classify_three_pass(table1)
        assert three == classify_all_unified(table1)
        assert counts == LpSolveCounts(16, 2)
        assert counts == expected_three_pass_counts(three, table1)

    def test_single_unit(self, single):
        (only,), counts = classify_three_pass(single)
        assert only.pareto is ParetoClass.E
        assert counts == LpSolveCounts(1, 0)

    def test_zero_input_unit(self):
        ds = Dataset([[0.0, 0.0]], [[1.0, 2.0]], ("LOW", "HIGH"))
        three, counts = classify_three_pass(ds)
        unified = classify_all_unified(ds)
        assert three == unified
        assert (unified[0].input, unified[0].output, unified[0].pareto) == (
            NW,
            NW,
            ParetoClass.WEP,
        )
        assert unified[1].pareto is ParetoClass.E
        assert counts == LpSolveCounts(4, 1) == expected_three_pass_counts(three, ds)

    def test_raisable_zero_output(self):
        ds = Dataset([[1.0, 1.0]], [[0.0, 3.0], [5.0, 6.0]], ("P", "Q"))
        (p, q), counts = classify_three_pass(ds)
        assert (p.input, p.output, p.pareto) == (WE, NW, ParetoClass.WEP)
        outcome = solve_unified(ds, 0)
        assert outcome.sum_t_plus == 2
        assert classify_unified(ds, 0) == p
        assert q.pareto is ParetoClass.E
        assert counts == LpSolveCounts(4, 1) == expected_three_pass_counts([p, q], ds)

    def test_needs_nonnegative_data(self, table4):
        with pytest.raises(PreconditionError):
            classify_three_pass(table4)

    def test_route_equivalence(self):
        for k, ds in enumerate(seeded_instances(500, seed=2024, zero_density=0.2)):
            unified = classify_all_unified(ds)
            three, counts = classify_three_pass(ds)
            assert three == unified, f"instance {k}"
            assert counts == expected_three_pass_counts(three, ds), f"instance {k}"
            assert counts.stage_one >= ds.n


class TestMembership:
    def test_sets_of_example(self, table1):
        sets = membership_sets(classify_all_unified(table1))
        assert sets["E"] == ["A", "B", "C"]
        assert sets["E'"] == ["D"]
        assert sets["WE_I"] == ["F"] and sets["NW_I"] == ["E", "G"] and sets["NN_I"] == ["H"]
        assert sets["WE_O"] == ["G"] and sets["NW_O"] == ["E", "F"] and sets["NN_O"] == ["H"]
        assert sets["WE_P"] == ["E", "F", "G"] and sets["NE_P"] == ["H"]
        assert sets["NE_I"] == ["E", "G", "H"] and sets["NE_O"] == ["E", "F", "H"]

    def test_point_in_technology(self, table1, table4):
        h = unit(table1, "H")
        assert verify_membership(table1.point(h), table1, h)
        assert not verify_membership(([0, 0], [5]), table1, h)
        d = unit(table4, "D")
        assert verify_membership(([-4], [3]), table4, d)

    def test_single_unit_technology_is_empty(self, single):
        assert not verify_membership(([5], [0]), single, 0)


class TestDominator:
    def test_non_extreme_unit_reproduces_itself(self, table1):
        o = unit(table1, "D")
        point = reconstruct_dominator(solve_unified(table1, o), table1, o)
        np.testing.assert_allclose(point.x, table1.X[:, o])
        np.testing.assert_allclose(point.y, table1.Y[:, o])

    def test_interior_unit_is_strictly_dominated(self, table1):
        o = unit(table1, "H")
        point = reconstruct_dominator(solve_unified(table1, o), table1, o)
        assert strongly_pareto_dominates(point, table1.point(o))

    def test_negative_data_input_reduction(self, table4):
        o = unit(table4, "F")
        point = reconstruct_dominator(solve_unified(table4, o), table4, o)
        assert point.x[0] < table4.X[0, o]
        assert point.y[0] == pytest.approx(table4.Y[0, o])

    def test_infeasible_outcome_rejected(self, table1):
        o = unit(table1, "A")
        with pytest.raises(PreconditionError):
            reconstruct_dominator(solve_unified(table1, o), table1, o)

    def test_dominator_soundness(self):
        for ds in seeded_instances(150, seed=99):
            for o in range(ds.n):
                outcome = solve_unified(ds, o)
                if not outcome.feasible or outcome.total == 0:
                    continue
                point = reconstruct_dominator(outcome, ds, o)
                assert verify_membership(point, ds, o)
                assert weakly_pareto_dominates(point, ds.point(o))
                if outcome.total == ds.m + ds.s:
                    assert strongly_pareto_dominates(point, ds.point(o))


class TestLift:
    def test_unit_itself(self, twins):
        delta, t_minus, t_plus = lift_dominating_point(twins.point(0), [1.0], twins, 0)
        np.testing.assert_allclose(delta, [1.0])
        assert t_minus.sum() == 0 and t_plus.sum() == 0

    def test_strongly_dominating_unit(self, table1):
        h, b = unit(table1, "H"), unit(table1, "B")
        mu = np.zeros(7)
        mu[table1.reduced(h).index_map.index(b)] = 1.0
        delta, t_minus, t_plus = lift_dominating_point(table1.point(b), mu, table1, h)
        np.testing.assert_array_equal(t_minus, [1, 1])
        np.testing.assert_array_equal(t_plus, [1])
        np.testing.assert_allclose(delta, mu)

    def test_small_slack_scales_weights(self):
        ds = Dataset([[1.0, 0.75]], [[1.0, 1.0]], ("O", "P"))
        delta, t_minus, _ = lift_dominating_point(ds.point(1), [1.0], ds, 0)
        np.testing.assert_allclose(delta, [4.0])
        np.testing.assert_array_equal(t_minus, [1])

    def test_rejects_non_dominating_point(self, table1):
        h, g = unit(table1, "H"), unit(table1, "G")
        mu = np.zeros(7)
        mu[table1.reduced(h).index_map.index(g)] = 1.0
        with pytest.raises(PreconditionError):
            lift_dominating_point(([1, 1], [5]), mu, table1, h)
        with pytest.raises(PreconditionError):
            lift_dominating_point(table1.point(g), mu * 0.5, table1, h)

    def test_lift_soundness(self):
        for ds in seeded_instances(100, seed=3):
            for o in range(ds.n):
                outcome = solve_unified(ds, o)
                if not outcome.feasible:
                    continue
                point = reconstruct_dominator(outcome, ds, o)
                mu = outcome.delta / outcome.sigma
                delta, t_minus, t_plus = lift_dominating_point(point, mu, ds, o)
                values = np.concatenate([delta, t_minus, t_plus])
                residuals = build_unified(ds, o).residuals(values)
                assert residuals.max(initial=0.0) <= 1e-6
                assert t_minus.sum() + t_plus.sum() <= outcome.total


class TestStructure:
    def test_duplicated_unit_is_never_extreme(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            ds = random_dataset(rng, int(rng.integers(1, 8)), 2, 2, zero_density=0.2)
            j = int(rng.integers(ds.n))
            doubled = Dataset(
                np.column_stack([ds.X, ds.X[:, j]]), np.column_stack([ds.Y, ds.Y[:, j]])
            )
            results = classify_all_unified(doubled)
            assert results[j].pareto is not ParetoClass.E
            assert results[-1].pareto is not ParetoClass.E

    def test_positive_data_boundary_structure(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            n, m, s = int(rng.integers(2, 11)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
            ds = random_dataset(rng, n, m, s, low=1)
            for c in classify_all_unified(ds):
                assert not (c.input is NW and c.output is NW)
                if WE in (c.input, c.output):
                    assert c.pareto is not ParetoClass.NEP


class TestCrossValidation:
    def test_example_agrees(self, table1):
        report = cross_validate(table1)
        assert report.passed and report.n_agree == 8
        assert report.routes == ("unified", "three_pass")
        assert report.lp_solves["unified"] == LpSolveCounts(8, 0)
        assert report.lp_solves["three_pass"] == LpSolveCounts(16, 2)

    def test_negative_data_compares_three_pareto_routes(self, table4):
        report = cross_validate(table4)
        assert report.passed
        assert report.routes == ("unified", "rdse_pareto", "translated")
        assert {u.name: u.labels["pareto"][0] for u in report.units} == {
            k: v.value for k, v in TABLE6.items()
        }

    def test_mixed_sign_random_data(self):
        rng = np.random.default_rng(21)
        for _ in range(40):
            ds = random_dataset(rng, int(rng.integers(2, 9)), 2, 2, negative_shift=4.0)
            assert cross_validate(ds).passed
