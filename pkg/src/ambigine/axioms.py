"""Checkable versions of the updating axioms and witness searches.

Each checker takes an :class:`~ambigine.updating.UpdateRule` so the same
predicate can be run against CML and the competing rules. Rules whose
posteriors are floats (the power rule) are compared with ``FLOAT_TOL``;
everything else is exact.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import (
    ExtendedAct,
    ExtremePriorSet,
    SimpleDecomposition,
    as_extended_act,
    evaluate_act,
    restrict,
)
from .errors import ColumnsDiffer, MalformedPair, PreconditionFailed, ShapeMismatch
from .numbers import to_fraction
from .updating import (
    UpdateRule,
    apply_rule,
    as_prior_set,
    ex_ante_value,
    prior_non_null_signals,
)

FLOAT_TOL = 1e-12
PERTURBATIONS = (Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(1))


def _tol(*values):
    return FLOAT_TOL if any(isinstance(v, float) for v in values) else 0


def _leq(a, b):
    return a <= b + _tol(a, b)


def _gt(a, b):
    return a > b + _tol(a, b)


def _single_cell(f, g, j):
    """Locate the unique cell where ``g`` exceeds ``f``; it must lie in column ``j``.

    Returns None when ``f == g``.
    """
    if f.shape != g.shape:
        raise ShapeMismatch("acts of different shapes")
    diff = [(i, k) for i, (fr, gr) in enumerate(zip(f.payoff, g.payoff))
            for k, (a, b) in enumerate(zip(fr, gr)) if a != b]
    if not diff:
        return None
    if len(diff) > 1:
        raise MalformedPair(f"acts differ at {len(diff)} cells")
    i, k = diff[0]
    if k != j:
        raise MalformedPair("the raised cell is not in the observed signal's column")
    if g.payoff[i][k] < f.payoff[i][k]:
        raise MalformedPair("g must exceed f at the differing cell")
    return i, k


def check_isu_pair(prior, theta, f, g, rule: UpdateRule) -> bool:
    """``V(g) - V(f) <= V_theta(g|theta) - V_theta(f|theta)`` for a single-cell raise."""
    f, g = as_extended_act(f), as_extended_act(g)
    _single_cell(f, g, prior.signals.index(theta))
    Q = apply_rule(rule, prior, theta)
    ex_ante = ex_ante_value(prior, g) - ex_ante_value(prior, f)
    ex_post = (evaluate_act(Q, restrict(g, theta, prior.signals))
               - evaluate_act(Q, restrict(f, theta, prior.signals)))
    return _leq(ex_ante, ex_post)


@dataclass(frozen=True)
class IsuWitness:
    """A pair of extended acts violating increased sensitivity after updating."""

    f: ExtendedAct
    g: ExtendedAct
    cell: tuple
    v_f: object
    v_g: object
    v_f_post: object
    v_g_post: object

    @property
    def is_violation(self):
        equal = abs(self.v_f - self.v_f_post) <= _tol(self.v_f, self.v_f_post)
        return equal and _gt(self.v_g, self.v_g_post)


def _min_affine(pieces, x):
    return min(a + b * x for a, b in pieces)


def solve_min_affine_equal(left, right):
    """Find ``x`` with ``min_i(a_i + b_i x) == min_k(c_k + d_k x)``, or None.

    Both sides are concave and piecewise linear. At a root the active pieces
    of the two sides meet, so it suffices to test the pairwise crossings of
    all pieces (plus the origin, for the case of coinciding pieces).
    """
    pieces = list(left) + list(right)
    candidates = {Fraction(0)} if not any(isinstance(v, float) for p in pieces for v in p) else {0.0}
    for idx, (a, b) in enumerate(pieces):
        for c, d in pieces[idx + 1:]:
            if b != d:
                candidates.add((c - a) / (b - d))
    best = None
    for x in sorted(candidates):
        gap = _min_affine(left, x) - _min_affine(right, x)
        if gap == 0:
            return x
        if abs(gap) <= _tol(gap) and (best is None or abs(gap) < best[0]):
            best = (abs(gap), x)
    return None if best is None else best[1]


def _affine_pieces_ex_ante(P: ExtremePriorSet, f, cell):
    fi, fj = cell
    pieces = []
    for p in P.extremes:
        a = sum(p.mass[i][j] * f.payoff[i][j] for i in range(len(f.payoff))
                for j in range(len(f.payoff[0])) if (i, j) != cell)
        pieces.append((a, p.mass[fi][fj]))
    return pieces


def _affine_pieces_ex_post(Q, f, cell, j_theta):
    fi, fj = cell
    column = f.column(j_theta)
    pieces = []
    for q in Q.extremes:
        if fj == j_theta:
            a = sum(q[i] * column[i] for i in range(len(column)) if i != fi)
            pieces.append((a, q[fi]))
        else:
            pieces.append((sum(x * y for x, y in zip(q, column)), 0))
    return pieces


def _random_act(rng, m, n):
    if rng.random() < 0.3:
        return [[Fraction(rng.randint(0, 1)) for _ in range(n)] for _ in range(m)]
    return [[Fraction(rng.randint(-8, 8), rng.choice((1, 2, 3, 4))) for _ in range(n)]
            for _ in range(m)]


def search_isu_violation(prior, theta, rule: UpdateRule, budget=500,
                         seed=0) -> Optional[IsuWitness]:
    """Randomised search for an ISU counterexample.

    Each candidate draws a base act, picks the raised cell in ``theta``'s
    column and one free cell, solves the free payoff so that the ex-ante and
    ex-post values of ``f`` coincide, raises the cell by a grid step and
    tests ``V(g) > V_theta(g|theta)``. At most ``budget`` candidates are tried.
    """
    rng = random.Random(seed)
    P = as_prior_set(prior)
    m, n = P.shape
    j_theta = P.signals.index(theta)
    Q = apply_rule(rule, prior, theta)
    cells = [(i, j) for i in range(m) for j in range(n)]
    tries = 0
    while tries < budget:
        base = _random_act(rng, m, n)
        raised = (rng.randrange(m), j_theta)
        free = rng.choice([c for c in cells if c != raised] or [raised])
        if free == raised:
            return None
        f = ExtendedAct(base)
        x = solve_min_affine_equal(_affine_pieces_ex_ante(P, f, free),
                                   _affine_pieces_ex_post(Q, f, free, j_theta))
        if x is None:
            tries += 1
            continue
        f = f.with_cell(*free, x) if not isinstance(x, float) else f.with_cell(*free, to_fraction(x))
        v_f = ex_ante_value(prior, f)
        v_f_post = evaluate_act(Q, restrict(f, theta, P.signals))
        for delta in PERTURBATIONS:
            tries += 1
            g = f.with_cell(*raised, f.payoff[raised[0]][raised[1]] + delta)
            witness = IsuWitness(
                f, g, (P.states.labels[raised[0]], theta), v_f,
                ex_ante_value(prior, g), v_f_post,
                evaluate_act(Q, restrict(g, theta, P.signals)))
            if witness.is_violation:
                return witness
            if tries >= budget:
                break
    return None


def _column_set(P: ExtremePriorSet, theta):
    j = P.signals.index(theta)
    return {p.column(j) for p in P.extremes}


def agree_on_column(P, P2, theta):
    """Extreme-point version of agreement on ``S x {theta}``."""
    P, P2 = as_prior_set(P), as_prior_set(P2)
    if P.states != P2.states:
        return False
    return _column_set(P, theta) == _column_set(P2, theta)


def check_iis(P, P2, theta, rule: UpdateRule) -> bool:
    """Independence of irrelevant signals on one qualifying pair."""
    if not agree_on_column(P, P2, theta):
        raise ColumnsDiffer(f"prior sets disagree on the column of {theta!r}")
    return apply_rule(rule, P, theta).same_set(apply_rule(rule, P2, theta))


def _row_pairs(P: ExtremePriorSet, i, k):
    return {(p.mass[i], p.mass[k]) for p in P.extremes}


def agree_on_rows(P, P2, s, s2):
    """Extreme-point version of agreement on ``{s, s2} x Theta``."""
    P, P2 = as_prior_set(P), as_prior_set(P2)
    if P.states != P2.states or P.signals != P2.signals:
        return False
    i, k = P.states.index(s), P.states.index(s2)
    return _row_pairs(P, i, k) == _row_pairs(P2, i, k)


def _ratio(a, b):
    if b == 0:
        return float("inf")
    return a / b


def ratio_range(Q, i, k):
    """Min and max of ``q(s)/q(s2)`` over the posterior hull (attained at vertices)."""
    ratios = [_ratio(q[i], q[k]) for q in Q.extremes]
    return min(ratios), max(ratios)


def _same_ratio(a, b):
    if a == float("inf") or b == float("inf"):
        return a == b
    if isinstance(a, float) or isinstance(b, float):
        return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))
    return a == b


def check_rc_pair(P, P2, theta, s, s2, rule: UpdateRule) -> bool:
    """Ratio consistency between states ``s`` and ``s2`` on one qualifying pair."""
    states = as_prior_set(P).states
    if len(states) < 3:
        raise PreconditionFailed("ratio consistency needs at least three states")
    if s == s2:
        raise PreconditionFailed("the two states must differ")
    if not agree_on_rows(P, P2, s, s2):
        raise PreconditionFailed(f"prior sets disagree on rows {s!r}, {s2!r}")
    for prior in (P, P2):
        if theta not in prior_non_null_signals(prior):
            raise PreconditionFailed(f"signal {theta!r} is null")
    i, k = states.index(s), states.index(s2)
    Q, Q2 = apply_rule(rule, P, theta), apply_rule(rule, P2, theta)
    for posterior in (Q, Q2):
        if min(q[i] + q[k] for q in posterior.extremes) <= 0:
            raise PreconditionFailed("posterior is not strictly increasing on the pair")
    lo, hi = ratio_range(Q, i, k)
    lo2, hi2 = ratio_range(Q2, i, k)
    return _same_ratio(lo, lo2) and _same_ratio(hi, hi2)


def check_not_all_news_bad(prior, f, rule: UpdateRule) -> bool:
    """Is some non-null signal weakly good news for ``f``?"""
    f = as_extended_act(f)
    signals = prior_non_null_signals(prior)
    if not signals:
        raise PreconditionFailed("no non-null signal")
    value = ex_ante_value(prior, f)
    for theta in signals:
        post = evaluate_act(apply_rule(rule, prior, theta), restrict(f, theta, prior.signals))
        if _leq(value, post):
            return True
    return False


@dataclass(frozen=True)
class FeasibilityBounds:
    bounds: dict
    total: Fraction
    feasible: bool


def isu_feasibility_bounds(P: ExtremePriorSet, theta) -> FeasibilityBounds:
    """Lower bounds on posterior probabilities forced by ISU at ``theta``.

    For every state with positive mass at ``theta`` the ex-post weight must be
    at least ``max_p p(s, theta)``; the bounds are jointly satisfiable only if
    they sum to at most one. ``P`` need not be simple.
    """
    j = P.signals.index(theta)
    bounds = {}
    for i, s in enumerate(P.states):
        top = P.max_mass(i, j)
        if top > 0:
            bounds[s] = top
    total = sum(bounds.values(), Fraction(0))
    return FeasibilityBounds(bounds, total, total <= 1)


# -- pair constructions ------------------------------------------------------

def _fill_row(row_theta, template, j):
    """Complete a kernel row: keep ``row_theta`` at ``j`` and spread the rest.

    The remainder is spread over the other signals proportionally to
    ``template`` (uniformly if the template has no mass there).
    """
    n = len(template)
    others = [k for k in range(n) if k != j]
    rest = 1 - row_theta
    row = [Fraction(0)] * n
    row[j] = row_theta
    if not others:
        return tuple(row)
    weight = sum(template[k] for k in others)
    for k in others:
        row[k] = rest * template[k] / weight if weight > 0 else rest / len(others)
    return tuple(row)


def iis_companion(D: SimpleDecomposition, theta, s1, s2, s3) -> SimpleDecomposition:
    """A second decomposition agreeing with ``D`` on ``theta``'s column.

    States ``s1`` and ``s2`` are rescaled so their maximal likelihood of
    ``theta`` becomes one; ``s3`` absorbs the freed prior mass. Requires
    ``mu(s1) * max_t c^t(theta|s1) > 0``.
    """
    states = D.states
    i1, i2, i3 = (states.index(s) for s in (s1, s2, s3))
    if len({i1, i2, i3}) != 3:
        raise PreconditionFailed("need three distinct states")
    j = D.signals.index(theta)
    top = D.max_likelihood(j)
    mu = list(D.mu)
    if mu[i1] * top[i1] == 0:
        raise PreconditionFailed(f"state {s1!r} has zero likelihood of {theta!r}")
    new_mu = list(mu)
    new_mu[i1] = mu[i1] * top[i1]
    new_mu[i2] = mu[i2] * top[i2]
    new_mu[i3] = mu[i1] + mu[i2] + mu[i3] - new_mu[i1] - new_mu[i2]
    n = len(D.signals)
    uniform = tuple(Fraction(1, n) for _ in range(n))
    kernels = []
    for kernel in D.kernels:
        rows = []
        for i, row in enumerate(kernel):
            if new_mu[i] == 0:
                rows.append(uniform)
                continue
            if i == i1:
                value = row[j] / top[i1]
            elif i == i2:
                value = row[j] / top[i2] if top[i2] > 0 else row[j]
            elif i == i3:
                value = mu[i3] / new_mu[i3] * row[j]
            else:
                value = row[j]
            rows.append(_fill_row(value, row, j))
        kernels.append(tuple(rows))
    companion = SimpleDecomposition(states, D.signals, tuple(new_mu), tuple(kernels))
    for t, (old, new) in enumerate(zip(D.kernels, companion.kernels)):
        for i in range(len(states)):
            assert D.mu[i] * old[i][j] == companion.mu[i] * new[i][j], (t, i)
    return companion


def rc_companion(D: SimpleDecomposition, theta, s1, s2) -> SimpleDecomposition:
    """Keep the rows of ``s1`` and ``s2``; every other state emits ``theta`` surely."""
    states = D.states
    keep = {states.index(s1), states.index(s2)}
    j = D.signals.index(theta)
    sure = tuple(Fraction(int(k == j)) for k in range(len(D.signals)))
    kernels = tuple(tuple(row if i in keep else sure for i, row in enumerate(kernel))
                    for kernel in D.kernels)
    return SimpleDecomposition(states, D.signals, D.mu, kernels)
