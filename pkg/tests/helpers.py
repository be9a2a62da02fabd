"""Random instance generators and independent oracles shared by the tests."""

from fractions import Fraction

from ambigine.axioms import iis_companion, rc_companion
from ambigine.core import ExtremePriorSet, SimpleDecomposition
from ambigine.lp import solve_lp

DENOM = 24


def composition(rng, total, parts, positive=False):
    """Random nonnegative integers summing to ``total`` (all positive if asked)."""
    if positive:
        assert total >= parts
        cuts = sorted(rng.sample(range(1, total), parts - 1))
        bounds = [0] + cuts + [total]
        return [b - a for a, b in zip(bounds, bounds[1:])]
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0] + cuts + [total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def labels(prefix, n):
    return tuple(f"{prefix}{i}" for i in range(n))


def random_simple_prior_set(rng, m=None, n=None, k=None, positive_mu=False, denom=DENOM):
    """A simple prior set whose entries have denominators dividing ``denom``."""
    m = m or rng.randint(1, 5)
    n = n or rng.randint(1, 5)
    k = k or rng.randint(1, 4)
    mu = composition(rng, denom, m, positive=positive_mu)
    extremes = []
    for _ in range(k):
        extremes.append([[Fraction(x, denom) for x in composition(rng, a, n)] for a in mu])
    return ExtremePriorSet(labels("s", m), labels("t", n), extremes)


def random_decomposition(rng, m, n, k, denom=DENOM, positive_mu=True):
    mu = [Fraction(a, denom) for a in composition(rng, denom, m, positive=positive_mu)]
    kernels = [[[Fraction(x, denom) for x in composition(rng, denom, n)] for _ in range(m)]
               for _ in range(k)]
    return SimpleDecomposition(labels("s", m), labels("t", n), mu, kernels)


def random_act(rng, m, n, lo=-6, hi=6):
    return [[Fraction(rng.randint(lo * 4, hi * 4), 4) for _ in range(n)] for _ in range(m)]


def single_cell_pair(rng, P, theta):
    """Random ``(f, g)`` with ``g`` above ``f`` only at one cell of ``theta``'s column."""
    m, n = P.shape
    f = random_act(rng, m, n)
    g = [row[:] for row in f]
    i, j = rng.randrange(m), P.signals.index(theta)
    g[i][j] += Fraction(rng.randint(1, 16), 8)
    return f, g


def non_null(P):
    return [theta for j, theta in enumerate(P.signals) if any(p.signal_mass(j) > 0 for p in P.extremes)]


# -- pairs for the consistency axioms ------------------------------------------

def resample_outside_column(rng, P, theta, denom=DENOM):
    """Keep every extreme's ``theta`` column and redraw the other columns."""
    j = P.signals.index(theta)
    mu = P.extremes[0].state_marginal()
    n = len(P.signals)
    extremes = []
    for p in P.extremes:
        rows = []
        for i, row in enumerate(p.mass):
            rest = (mu[i] - row[j]) * denom
            assert rest.denominator == 1
            spread = composition(rng, int(rest), n - 1) if n > 1 else []
            spread = iter(Fraction(x, denom) for x in spread)
            rows.append([row[j] if k == j else next(spread) for k in range(n)])
        extremes.append(rows)
    rng.shuffle(extremes)
    return ExtremePriorSet(P.states, P.signals, extremes)


def resample_outside_rows(rng, P, keep, denom=DENOM):
    """Keep the rows in ``keep`` of every extreme; redraw the rest (marginal may move)."""
    m, n = P.shape
    mu = P.extremes[0].state_marginal()
    others = [i for i in range(m) if i not in keep]
    free = sum(mu[i] for i in others) * denom
    new_mu = composition(rng, int(free), len(others))
    extremes = []
    for p in P.extremes:
        rows = [list(r) for r in p.mass]
        for i, a in zip(others, new_mu):
            rows[i] = [Fraction(x, denom) for x in composition(rng, a, n)]
        extremes.append(rows)
    return ExtremePriorSet(P.states, P.signals, extremes)


def column_preserving_pair(rng, m=None, n=None, k=None):
    """``(P, P')`` agreeing on one signal's column, built by rescaling three states."""
    while True:
        D = random_decomposition(rng, m or rng.randint(3, 5), n or rng.randint(2, 4), k or rng.randint(1, 3))
        theta = rng.choice(D.signals.labels)
        s1, s2, s3 = rng.sample(D.states.labels, 3)
        j = D.signals.index(theta)
        if D.mu[D.states.index(s1)] * D.max_likelihood(j)[D.states.index(s1)] == 0:
            continue
        return D, iis_companion(D, theta, s1, s2, s3), theta, (s1, s2, s3)


def row_preserving_pair(rng):
    """``(P', P'')`` agreeing on two rows; every other state sends ``theta`` surely in ``P''``."""
    D, D1, theta, (s1, s2, _) = column_preserving_pair(rng)
    return D1, rc_companion(D1, theta, s1, s2), theta, (s1, s2)


# -- oracles -------------------------------------------------------------------

def rationalizable_by_lp(mu, posteriors):
    """Feasibility of CML rationalization over free likelihood scales.

    With ``x_theta`` the reciprocal of the unknown normalising constant, the
    maximal likelihoods are ``x_theta * mu_theta(s) / mu(s)``. They must lie in
    ``[0, 1]``, and for each state they must leave room for a full kernel row,
    i.e. sum to at least one. Solved exactly by linear programming.
    """
    thetas = list(posteriors)
    m = len(mu)
    A_ub, b_ub = [], []
    for t, theta in enumerate(thetas):
        for i in range(m):
            row = [0] * len(thetas)
            row[t] = posteriors[theta][i] / mu[i]
            A_ub.append(row)
            b_ub.append(1)
    for i in range(m):
        A_ub.append([-posteriors[theta][i] / mu[i] for theta in thetas])
        b_ub.append(-1)
    return solve_lp([0] * len(thetas), A_ub, b_ub).feasible

