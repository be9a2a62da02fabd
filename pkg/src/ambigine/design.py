"""Ambiguous information design against an agent who updates by CML.

A designer commits to several signal-generating systems at once. The agent
updates each signal with the conditional maximum likelihood, so the designer
can steer posteriors signal by signal, provided every announced system pays
the designer the same.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Optional

from .core import SignalSpace, StateSpace
from .errors import AssumptionFailed, DegenerateTargets, NotImplementable, ShapeMismatch
from .lp import solve_lp
from .numbers import fraction_matrix, fraction_vector, to_fraction


@dataclass(frozen=True)
class PersuasionInstance:
    """Agent payoffs ``u[s][a]``, designer payoffs ``v[s][a]`` and a full-support prior."""

    states: StateSpace
    actions: tuple
    u: tuple
    v: tuple
    mu: tuple

    def __post_init__(self):
        states = self.states if isinstance(self.states, StateSpace) else StateSpace(tuple(self.states))
        actions = tuple(self.actions)
        if not actions or len(set(actions)) != len(actions):
            raise ValueError("actions must be distinct and nonempty")
        u, v, mu = fraction_matrix(self.u), fraction_matrix(self.v), fraction_vector(self.mu)
        for name, table in (("u", u), ("v", v)):
            if len(table) != len(states) or any(len(row) != len(actions) for row in table):
                raise ShapeMismatch(f"{name} must be states x actions")
        if len(mu) != len(states) or sum(mu) != 1 or any(p <= 0 for p in mu):
            raise ValueError("prior must be a full-support probability vector")
        for name, value in (("states", states), ("actions", actions), ("u", u), ("v", v), ("mu", mu)):
            object.__setattr__(self, name, value)

    def action_index(self, a):
        return self.actions.index(a)

    def expected_u(self, belief, a):
        k = self.action_index(a)
        return sum(p * row[k] for p, row in zip(belief, self.u))


def best_responses(I: PersuasionInstance, belief) -> tuple:
    """All agent-optimal actions at ``belief``, in action order."""
    belief = fraction_vector(belief)
    values = [I.expected_u(belief, a) for a in I.actions]
    top = max(values)
    return tuple(a for a, x in zip(I.actions, values) if x == top)


@dataclass(frozen=True)
class Attainability:
    """Which actions are optimal at some belief, with a witness for each."""

    attainable: tuple
    witnesses: dict
    interior: dict

    @property
    def missing_interior(self):
        return tuple(a for a in self.attainable if not self.interior[a])


def _witness(I, a):
    """Belief making ``a`` a best response, as interior as possible.

    Stage one maximises the smallest coordinate ``t``. Stage two keeps every
    coordinate at least ``t/2`` and maximises the margin over actions whose
    payoff column differs from ``a``'s. Returns ``(belief, t)`` or None.
    """
    m, k = len(I.states), I.action_index(a)
    rivals = [b for b in range(len(I.actions)) if b != k]
    A_ub, b_ub = [], []
    for b in rivals:
        A_ub.append([I.u[s][b] - I.u[s][k] for s in range(m)] + [0])
        b_ub.append(0)
    for s in range(m):
        A_ub.append([-int(i == s) for i in range(m)] + [1])
        b_ub.append(0)
    stage1 = solve_lp([0] * m + [1], A_ub, b_ub, [[1] * m + [0]], [1], maximize=True)
    if not stage1.feasible:
        return None
    belief, t = stage1.x[:m], stage1.value
    distinct = [b for b in rivals if any(I.u[s][b] != I.u[s][k] for s in range(m))]
    if t > 0 and distinct:
        A_ub = [[I.u[s][b] - I.u[s][k] for s in range(m)] + [1] for b in distinct]
        b_ub = [0] * len(distinct)
        for s in range(m):
            A_ub.append([-int(i == s) for i in range(m)] + [0])
            b_ub.append(-t / 2)
        stage2 = solve_lp([0] * m + [1], A_ub, b_ub, [[1] * m + [0]], [1], maximize=True)
        belief = stage2.x[:m]
    return tuple(belief), t


def attainable_actions(I: PersuasionInstance, strict=False) -> Attainability:
    """The set ``A*`` of actions that are a best response to some belief.

    With ``strict`` set, raises AssumptionFailed when some attainable action
    is optimal only at beliefs on the boundary of the simplex.
    """
    attainable, witnesses, interior = [], {}, {}
    for a in I.actions:
        found = _witness(I, a)
        if found is None:
            continue
        attainable.append(a)
        witnesses[a], t = found
        interior[a] = t > 0
    result = Attainability(tuple(attainable), witnesses, interior)
    if strict and result.missing_interior:
        raise AssumptionFailed("actions optimal only at boundary beliefs", result.missing_interior)
    return result


def ideal_payoff(I: PersuasionInstance, attainable=None):
    """``sum_s mu(s) max_{a in A*} v(s, a)``."""
    if attainable is None:
        attainable = attainable_actions(I).attainable
    idx = [I.action_index(a) for a in attainable]
    return sum(p * max(row[k] for k in idx) for p, row in zip(I.mu, I.v))


# -- structures ---------------------------------------------------------------

@dataclass(frozen=True)
class AmbiguousStructure:
    """Signals plus a finite list of systems ``systems[t][s][theta]``."""

    states: StateSpace
    signals: SignalSpace
    systems: tuple

    def __post_init__(self):
        states = self.states if isinstance(self.states, StateSpace) else StateSpace(tuple(self.states))
        signals = self.signals if isinstance(self.signals, SignalSpace) else SignalSpace(tuple(self.signals))
        systems = tuple(fraction_matrix(k) for k in self.systems)
        if not systems:
            raise ValueError("need at least one system")
        for k in systems:
            if len(k) != len(states) or any(len(row) != len(signals) for row in k):
                raise ShapeMismatch("system shape does not match states x signals")
            if any(any(x < 0 for x in row) or sum(row) != 1 for row in k):
                raise ValueError("system rows must be distributions over signals")
        for j, theta in enumerate(signals):
            if all(k[i][j] == 0 for k in systems for i in range(len(states))):
                raise ValueError(f"signal {theta!r} is never sent")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "systems", systems)

    def max_likelihood(self, j):
        return tuple(max(k[i][j] for k in self.systems) for i in range(len(self.states)))


def _signal_label(j, l):
    return f"theta_{j + 1}_{l + 1}"


@dataclass(frozen=True)
class BlockStructure:
    """Closed-form structure with ``m`` blocks of ``N`` signals and ``m * N`` systems.

    Block ``j`` serves state ``s_j``. System ``(j, l)`` sends its own signal
    ``theta_{j,l}`` with probability ``r[j] * lam[j][s]`` in state ``s``; the
    rest of the row goes to the other signals of block ``j`` when ``s = s_j``
    (``N - 1`` of them) and to all ``N`` signals of ``s``'s block otherwise.
    """

    states: StateSpace
    r: tuple
    lam: tuple
    N: int

    def __post_init__(self):
        m = len(self.states)
        r, lam = fraction_vector(self.r), fraction_matrix(self.lam)
        if len(r) != m or len(lam) != m or any(len(row) != m for row in lam):
            raise ShapeMismatch("need one r and one lambda vector per state")
        if self.N < 2:
            raise ValueError("need at least two signals per block")
        for rj, row in zip(r, lam):
            if not 0 < rj < 1 or any(not 0 < x < 1 for x in row):
                raise ValueError("r and lambda entries must lie in (0, 1)")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "lam", lam)

    @property
    def m(self):
        return len(self.states)

    def own(self, j, i):
        """``c^{j,l}(theta_{j,l} | s_i)``."""
        return self.r[j] * self.lam[j][i]

    def same_block(self, j):
        """``c^{j,l}(theta_{j,l'} | s_j)`` for ``l' != l``."""
        return (1 - self.own(j, j)) / (self.N - 1)

    def cross(self, j, i):
        """``c^{j,l}(theta_{i,l'} | s_i)`` for ``i != j`` and any ``l'``."""
        return (1 - self.own(j, i)) / self.N

    def entry(self, system, signal, i):
        (j, l), (j2, l2) = system, signal
        if (j, l) == (j2, l2):
            return self.own(j, i)
        if j2 != i:
            return Fraction(0)
        return self.same_block(j) if j == j2 else self.cross(j, i)

    def competitors(self, j, i):
        """Likelihoods of ``theta_{j,l}`` at ``s_i`` under systems other than ``(j, l)``."""
        if i != j:
            return [Fraction(0)]
        return [self.same_block(j)] + [self.cross(k, j) for k in range(self.m) if k != j]

    def max_likelihood(self, j):
        """``max_t c^t(theta_{j,l} | s)`` for every state (the same for every ``l``)."""
        return tuple(max([self.own(j, i)] + self.competitors(j, i)) for i in range(self.m))

    def own_is_unique_max(self):
        return all(self.own(j, i) > max(self.competitors(j, i))
                   for j in range(self.m) for i in range(self.m))

    def materialize(self) -> AmbiguousStructure:
        index = [(j, l) for j in range(self.m) for l in range(self.N)]
        systems = [[[self.entry(t, sig, i) for sig in index] for i in range(self.m)] for t in index]
        return AmbiguousStructure(self.states, SignalSpace(tuple(_signal_label(*x) for x in index)),
                                  tuple(systems))

    def describe(self):
        """Closed-form summary of the kernels, block by block."""
        return [{
            "block": self.states.labels[j],
            "diag": [self.own(j, i) for i in range(self.m)],
            "offdiag_same_state": self.same_block(j),
            "cross": [self.cross(j, i) if i != j else Fraction(0) for i in range(self.m)],
        } for j in range(self.m)]


@dataclass(frozen=True)
class DesignCertificate:
    structure: object
    actions_at_signal: dict
    posteriors: dict
    payoff_per_system: dict
    v_star: Fraction
    ideal: Fraction
    level: Optional[Fraction] = None
    targets: dict = field(default_factory=dict)


def _cml_posterior(mu, top):
    weights = [p * c for p, c in zip(mu, top)]
    total = sum(weights)
    return tuple(w / total for w in weights)


def _check_best_responses(I, posteriors, acts):
    for key, belief in posteriors.items():
        a = acts[key]
        if a not in I.actions:
            raise NotImplementable(f"unknown action {a!r}", condition=1, location=key)
        if a not in best_responses(I, belief):
            raise NotImplementable(f"{a!r} is not a best response at signal {key!r}",
                                   condition=1, location=key)


def _check_equal_payoffs(payoffs):
    values = list(payoffs.values())
    for key, value in payoffs.items():
        if value != values[0]:
            raise NotImplementable(
                f"system {key!r} pays {value}, others pay {values[0]}", condition=2, location=key)
    return values[0]


def verify_implementable(I: PersuasionInstance, G, acts) -> DesignCertificate:
    """Check both implementability conditions exactly and return a certificate.

    ``G`` is an :class:`AmbiguousStructure` with ``acts`` keyed by signal, or
    a :class:`BlockStructure` with ``acts`` keyed by block state (every signal
    of a block gets the block's action; all systems of a block pay the same).
    """
    if G.states != I.states:
        raise ShapeMismatch("structure and instance have different states")
    m = len(I.states)
    if isinstance(G, BlockStructure):
        posteriors = {s: _cml_posterior(I.mu, G.max_likelihood(j)) for j, s in enumerate(I.states)}
        _check_best_responses(I, posteriors, acts)
        col = [I.action_index(acts[s]) for s in I.states]
        payoffs = {}
        for j, s in enumerate(I.states):
            payoffs[s] = sum(I.mu[i] * (G.own(j, i) * I.v[i][col[j]] + (1 - G.own(j, i)) * I.v[i][col[i]])
                             for i in range(m))
    else:
        posteriors = {theta: _cml_posterior(I.mu, G.max_likelihood(j))
                      for j, theta in enumerate(G.signals)}
        _check_best_responses(I, posteriors, acts)
        col = [I.action_index(acts[theta]) for theta in G.signals]
        payoffs = {}
        for t, k in enumerate(G.systems):
            payoffs[t] = sum(I.mu[i] * k[i][j] * I.v[i][col[j]]
                             for i in range(m) for j in range(len(G.signals)))
    v_star = _check_equal_payoffs(payoffs)
    return DesignCertificate(G, dict(acts), posteriors, payoffs, v_star, ideal_payoff(I))


def action_frequencies(I: PersuasionInstance, G: BlockStructure, acts, block):
    """Under any system of ``block``: probability of each action, state by state."""
    j = I.states.index(block)
    table = {}
    for i, s in enumerate(I.states):
        freq = dict.fromkeys(I.actions, Fraction(0))
        own = G.own(j, i)
        if i == j:
            freq[acts[block]] += 1
        else:
            freq[acts[block]] += own
            freq[acts[s]] += 1 - own
        table[s] = freq
    return table


# -- the epsilon construction ------------------------------------------------

def _designer_actions(I, attainable):
    idx = [I.action_index(a) for a in attainable]
    best = [[k for k in idx if row[k] == max(row[k2] for k2 in idx)] for row in I.v]
    common = set(best[0]).intersection(*best[1:])
    if common:
        a = I.actions[min(common)]
        return {s: a for s in I.states}
    return {s: I.actions[b[0]] for s, b in zip(I.states, best)}


def scaled_lambda(mu, target, top=Fraction(1, 2)):
    """``lam(s) ∝ target(s)/mu(s)``, scaled so the largest entry is ``top``."""
    ratios = [q / p for q, p in zip(target, mu)]
    scale = top / max(ratios)
    return tuple(x * scale for x in ratios)


def minimal_block_size(r, lam):
    """Smallest ``N`` with ``max (1 - r_j lam_j(s)) / (N - 1) < min r_j lam_j(s)``."""
    products = [rj * x for rj, row in zip(r, lam) for x in row]
    ratio = max(1 - p for p in products) / min(products)
    return max(2, floor(ratio) + 2)


def _validate_targets(I, targets, designer):
    out = {}
    for s in I.states:
        if s not in targets:
            raise DegenerateTargets(f"no target belief for {s!r}")
        q = fraction_vector(targets[s])
        if len(q) != len(I.states) or sum(q) != 1 or any(x <= 0 for x in q):
            raise DegenerateTargets(f"target for {s!r} is not an interior belief")
        if designer[s] not in best_responses(I, q):
            raise DegenerateTargets(f"{designer[s]!r} is not a best response at the target for {s!r}")
        out[s] = q
    return out


def construct_epsilon(I: PersuasionInstance, epsilon, targets=None, r=None, N=None) -> DesignCertificate:
    """Build an implementable design paying more than ``ideal - epsilon``.

    Signals of block ``s`` lead the agent to the target belief for ``s``,
    where the designer's favourite action at ``s`` is a best response. The
    probabilities ``r`` are solved so that every system pays the same level
    ``l* = ideal - delta`` with ``delta <= epsilon / 2``; ``delta`` halves until
    every ``r`` lies in ``(0, 1)``. Passing ``r`` (and optionally ``N``)
    skips the solve, e.g. to reproduce a given layout.
    """
    epsilon = to_fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    att = attainable_actions(I, strict=True)
    designer = _designer_actions(I, att.attainable)
    if targets is None:
        targets = {s: att.witnesses[designer[s]] for s in I.states}
    else:
        targets = _validate_targets(I, targets, designer)
    lam = tuple(scaled_lambda(I.mu, targets[s]) for s in I.states)
    ideal = ideal_payoff(I, att.attainable)
    m = len(I.states)
    col = [I.action_index(designer[s]) for s in I.states]
    slopes = [sum(I.mu[i] * lam[j][i] * (I.v[i][col[j]] - I.v[i][col[i]]) for i in range(m))
              for j in range(m)]
    level = None
    if r is None:
        if all(b == 0 for b in slopes):
            r, level = tuple(Fraction(1, 2) for _ in range(m)), ideal
        else:
            # a zero slope means a common optimal action, which was preferred above
            assert all(b < 0 for b in slopes), slopes
            delta = epsilon / 2
            while True:
                r = tuple(delta / -b for b in slopes)
                if all(x < 1 for x in r):
                    break
                delta /= 2
            level = ideal - delta
    if N is None:
        N = minimal_block_size(r, lam)
    G = BlockStructure(I.states, r, lam, N)
    cert = verify_implementable(I, G, designer)
    return DesignCertificate(G, cert.actions_at_signal, cert.posteriors, cert.payoff_per_system,
                             cert.v_star, cert.ideal, level, targets)
