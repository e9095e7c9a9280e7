"""Render classification results as markdown, json or csv."""

__all__ = ["REPORT_FORMATS", "ORIENTATIONS", "classification_frame", "render_report"]

import json

import pandas as pd

from dea.classify import (
    CrossValidationReport,
    FullClassification,
    LpSolveCounts,
    OrientedClass,
    ParetoClass,
    reconstruct_dominator,
)
from util.core import Dataset

REPORT_FORMATS = ("markdown", "json", "csv")
ORIENTATIONS = ("all", "input", "output", "pareto")

_CHECK = "✓"

_ORIENTED_COLUMNS = {
    "input": [("WE_I", OrientedClass.WE), ("NW_I", OrientedClass.NW), ("NN_I", OrientedClass.NN)],
    "output": [("WE_O", OrientedClass.WE), ("NW_O", OrientedClass.NW), ("NN_O", OrientedClass.NN)],
}
_PARETO_COLUMNS = [("WE_P", ParetoClass.WEP), ("NE_P", ParetoClass.NEP)]


def _sides(orientation: str) -> list[str]:
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {', '.join(ORIENTATIONS)}.")
    return ["input", "output", "pareto"] if orientation == "all" else [orientation]


def _floats(values) -> list[float] | None:
    return None if values is None else [float(v) for v in values]


def classification_frame(
    classifications: list[FullClassification], orientation: str = "all"
) -> pd.DataFrame:
    """Checkmark matrix: one row per unit, one column per membership set."""
    sides = _sides(orientation)
    rows = []
    for c in classifications:
        row = {"DMU": c.name}
        row["E"] = _CHECK if c.pareto is ParetoClass.E else ""
        row["E'"] = _CHECK if c.pareto is ParetoClass.EPRIME else ""
        for side in ("input", "output"):
            if side not in sides:
                continue
            label = getattr(c, side)
            for column, wanted in _ORIENTED_COLUMNS[side]:
                if label is OrientedClass.NOT_APPLICABLE:
                    row[column] = "n/a"
                else:
                    row[column] = _CHECK if label is wanted else ""
        if "pareto" in sides:
            for column, wanted in _PARETO_COLUMNS:
                row[column] = _CHECK if c.pareto is wanted else ""
        rows.append(row)
    return pd.DataFrame(rows)


def _markdown_table(frame: pd.DataFrame) -> list[str]:
    header = [str(c) for c in frame.columns]
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    for values in frame.itertuples(index=False):
        lines.append("| " + " | ".join(str(v) for v in values) + " |")
    return lines


def _solve_lines(lp_solves: dict[str, LpSolveCounts]) -> list[str]:
    return [
        f"- {route}: {counts.total} LP solves "
        f"({counts.stage_one} score stage, {counts.stage_two} slack stage)"
        for route, counts in lp_solves.items()
    ]


def _render_markdown(classifications, orientation, report: CrossValidationReport | None) -> str:
    lines = _markdown_table(classification_frame(classifications, orientation))
    if report is not None:
        lines.append("")
        routes = " vs ".join(report.routes)
        lines.append(f"Agreement ({routes}): {report.n_agree}/{len(report.units)}")
        for unit in report.mismatches:
            lines.append(f"- {unit.name}: {unit.labels}")
        lines.append("")
        lines.extend(_solve_lines(report.lp_solves))
    return "\n".join(lines) + "\n"


def _unit_record(c: FullClassification, ds: Dataset) -> dict:
    outcome = c.evidence
    record = {
        "name": c.name,
        "pareto": c.pareto.value,
        "input": c.input.value,
        "output": c.output.value,
        "t_minus": None,
        "t_plus": None,
        "sum_t_minus": None,
        "sum_t_plus": None,
        "sigma": None,
        "dominator": None,
    }
    if outcome is not None and outcome.feasible:
        point = reconstruct_dominator(outcome, ds, c.index)
        record.update(
            t_minus=_floats(outcome.t_minus),
            t_plus=_floats(outcome.t_plus),
            sum_t_minus=outcome.sum_t_minus,
            sum_t_plus=outcome.sum_t_plus,
            sigma=outcome.sigma,
            dominator={"x": _floats(point.x), "y": _floats(point.y)},
        )
    return record


def _render_json(classifications, ds: Dataset, report: CrossValidationReport | None) -> str:
    lp_solves = report.lp_solves if report else {"unified": LpSolveCounts(ds.n, 0)}
    payload = {
        "units": [_unit_record(c, ds) for c in classifications],
        "lp_solves": {route: counts.total for route, counts in lp_solves.items()},
    }
    if report is not None:
        payload["agreement"] = {
            "routes": list(report.routes),
            "agree": report.n_agree,
            "units": len(report.units),
        }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _render_csv(classifications, orientation) -> str:
    sides = _sides(orientation)
    frame = pd.DataFrame(
        {
            "dmu": [c.name for c in classifications],
            **{side: [getattr(c, side).value for c in classifications] for side in sides},
            "sum_t_minus": [
                c.evidence.sum_t_minus if c.evidence is not None else None
                for c in classifications
            ],
            "sum_t_plus": [
                c.evidence.sum_t_plus if c.evidence is not None else None
                for c in classifications
            ],
        }
    )
    frame["sum_t_minus"] = frame["sum_t_minus"].astype("Int64")
    frame["sum_t_plus"] = frame["sum_t_plus"].astype("Int64")
    return frame.to_csv(index=False, encoding="utf-8", lineterminator="\n")


def render_report(
    classifications: list[FullClassification],
    ds: Dataset,
    fmt: str = "markdown",
    orientation: str = "all",
    report: CrossValidationReport | None = None,
) -> str:
    """Render the classifications of ds, plus the route comparison when one is given."""
    if fmt == "markdown":
        return _render_markdown(classifications, orientation, report)
    if fmt == "json":
        return _render_json(classifications, ds, report)
    if fmt == "csv":
        return _render_csv(classifications, orientation)
    raise ValueError(f"Unknown format '{fmt}'. Choose from {', '.join(REPORT_FORMATS)}.")
