"""Exact-rational LP optimum by enumerating basic feasible solutions. Only for tiny programs."""

from fractions import Fraction
from itertools import combinations


def _solve_square(A, b):
    """Gauss-Jordan elimination over Fractions. Returns None when A is singular."""
    k = len(A)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if M[r][col] != 0), None)
        if pivot is None:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for r in range(k):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], M[col])]
    return [M[r][k] for r in range(k)]


def exact_optimum(c, A_eq, b_eq, maximize=False):
    """
    Optimal value of  opt c'x  s.t.  A_eq x = b_eq, x >= 0  with A_eq of full row rank.
    Returns (value, x) or None when no basic feasible solution exists.
    """
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A_eq]
    b = [Fraction(v) for v in b_eq]
    rows, cols = len(A), len(c)
    best = None
    for basis in combinations(range(cols), rows):
        sub = [[A[i][j] for j in basis] for i in range(rows)]
        values = _solve_square(sub, b)
        if values is None or any(v < 0 for v in values):
            continue
        x = [Fraction(0)] * cols
        for j, v in zip(basis, values):
            x[j] = v
        value = sum(ci * xi for ci, xi in zip(c, x))
        if best is None or (value > best[0] if maximize else value < best[0]):
            best = (value, x)
    return best


def bcc_input_theta(X, Y, o):
    """
    min theta  s.t.  X lambda + s_i = theta x_o,  Y lambda - s_r = y_o,  1'lambda = 1.
    Columns: theta, lambda (n), input slacks (m), output slacks (s).
    """
    m, n, s = len(X), len(X[0]), len(Y)
    A, b = [], []
    for i in range(m):
        A.append([-X[i][o]] + X[i] + [1 if k == i else 0 for k in range(m)] + [0] * s)
        b.append(0)
    for r in range(s):
        A.append([0] + Y[r] + [0] * m + [-1 if k == r else 0 for k in range(s)])
        b.append(Y[r][o])
    A.append([0] + [1] * n + [0] * (m + s))
    b.append(1)
    c = [1] + [0] * (n + m + s)
    return exact_optimum(c, A, b)[0]


def bcc_output_phi(X, Y, o):
    """max phi  s.t.  X lambda + s_i = x_o,  Y lambda - s_r = phi y_o,  1'lambda = 1."""
    m, n, s = len(X), len(X[0]), len(Y)
    A, b = [], []
    for i in range(m):
        A.append([0] + X[i] + [1 if k == i else 0 for k in range(m)] + [0] * s)
        b.append(X[i][o])
    for r in range(s):
        A.append([-Y[r][o]] + Y[r] + [0] * m + [-1 if k == r else 0 for k in range(s)])
        b.append(0)
    A.append([0] + [1] * n + [0] * (m + s))
    b.append(1)
    c = [1] + [0] * (n + m + s)
    return exact_optimum(c, A, b, maximize=True)[0]
