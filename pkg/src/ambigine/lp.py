"""Exact linear programming over the rationals.

A dense two-phase simplex with Bland's anti-cycling rule. The instances in
this package are tiny (a handful of variables), so clarity wins over speed.
Every variable is constrained to be nonnegative.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .numbers import to_fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self):
        return self.status != INFEASIBLE


def _pivot(tableau, basis, row, col):
    pivot_row = tableau[row]
    pv = pivot_row[col]
    if pv != 1:
        tableau[row] = pivot_row = [v / pv for v in pivot_row]
    for i, other in enumerate(tableau):
        if i == row:
            continue
        factor = other[col]
        if factor:
            tableau[i] = [a - factor * b for a, b in zip(other, pivot_row)]
    basis[row] = col


def _simplex(tableau, basis, cost, allowed):
    """Minimise ``cost . x`` over the current tableau, in place.

    ``tableau`` rows are ``[coefficients..., rhs]`` in canonical form with
    respect to ``basis``. Only columns in ``allowed`` may enter.
    Returns False if the objective is unbounded below.
    """
    while True:
        # reduced cost of column j: c_j - c_B . column_j
        entering = None
        for j in allowed:
            if j in basis:
                continue
            reduced = cost[j] - sum(cost[basis[i]] * tableau[i][j]
                                    for i in range(len(tableau)))
            if reduced < 0:
                entering = j
                break
        if entering is None:
            return True
        best = None
        for i, row in enumerate(tableau):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if (best is None or ratio < best[0]
                        or (ratio == best[0] and basis[i] < basis[best[1]])):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tableau, basis, best[1], entering)


def solve_lp(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), maximize=False):
    """Optimise ``c . x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    All data are converted to Fractions and the answer is exact.

    >>> r = solve_lp([1, 1], A_ub=[[-1, 0]], b_ub=[-2], A_eq=[[1, 1]], b_eq=[5])
    >>> r.status, r.x, r.value
    ('optimal', (Fraction(2, 1), Fraction(3, 1)), Fraction(5, 1))
    """
    c = [to_fraction(v) for v in c]
    n = len(c)
    rows = []
    for coeffs, rhs in zip(A_ub, b_ub):
        rows.append(([to_fraction(v) for v in coeffs], to_fraction(rhs), True))
    for coeffs, rhs in zip(A_eq, b_eq):
        rows.append(([to_fraction(v) for v in coeffs], to_fraction(rhs), False))
    for coeffs, _, _ in rows:
        if len(coeffs) != n:
            raise ValueError("constraint width does not match objective")
    n_slack = sum(1 for _, _, ub in rows if ub)
    n_art = len(rows)
    width = n + n_slack + n_art
    tableau, basis = [], []
    slack_col = n
    for k, (coeffs, rhs, ub) in enumerate(rows):
        row = coeffs + [Fraction(0)] * (n_slack + n_art) + [rhs]
        if ub:
            row[slack_col] = Fraction(1)
            slack_col += 1
        if rhs < 0:
            row = [-v for v in row]
        art = n + n_slack + k
        row[art] = Fraction(1)
        tableau.append(row)
        basis.append(art)

    # phase 1: drive the artificial variables to zero
    phase1_cost = [Fraction(0)] * (n + n_slack) + [Fraction(1)] * n_art
    _simplex(tableau, basis, phase1_cost, range(width))
    infeasibility = sum(tableau[i][-1] for i, b in enumerate(basis) if b >= n + n_slack)
    if infeasibility > 0:
        return LPResult(INFEASIBLE)
    for i in reversed(range(len(tableau))):
        if basis[i] < n + n_slack:
            continue
        for j in range(n + n_slack):
            if tableau[i][j] != 0:
                _pivot(tableau, basis, i, j)
                break
        else:
            # redundant constraint
            del tableau[i]
            del basis[i]

    sign = Fraction(-1) if maximize else Fraction(1)
    phase2_cost = [sign * v for v in c] + [Fraction(0)] * (n_slack + n_art)
    if not _simplex(tableau, basis, phase2_cost, range(n + n_slack)):
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * width
    for i, b in enumerate(basis):
        x[b] = tableau[i][-1]
    x = tuple(x[:n])
    return LPResult(OPTIMAL, x, sum(ci * xi for ci, xi in zip(c, x)))


def convex_weights(point: Sequence, vertices: Sequence[Sequence]):
    """Return convex weights expressing ``point`` over ``vertices``, or None."""
    if not vertices:
        return None
    dim = len(point)
    k = len(vertices)
    A_eq = [[vertices[i][d] for i in range(k)] for d in range(dim)]
    A_eq.append([1] * k)
    b_eq = list(point) + [1]
    result = solve_lp([0] * k, A_eq=A_eq, b_eq=b_eq)
    return result.x if result.feasible else None


def in_hull(point, vertices):
    """Exact membership of ``point`` in the convex hull of ``vertices``."""
    return convex_weights(point, vertices) is not None


def same_hull(vertices_a, vertices_b):
    """True iff the two finite point sets generate the same polytope."""
    return (all(in_hull(p, vertices_b) for p in vertices_a)
            and all(in_hull(q, vertices_a) for q in vertices_b))


def prune_to_extremes(vertices):
    """Drop generators that are convex combinations of the others."""
    unique = list(dict.fromkeys(tuple(v) for v in vertices))
    kept = []
    for i, v in enumerate(unique):
        others = kept + unique[i + 1:]
        if not in_hull(v, others):
            kept.append(v)
    return kept
