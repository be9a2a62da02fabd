"""Domain types and max-min evaluation of acts and extended acts.

A prior set over states x signals is stored as the finite list of its
extreme points; its convex hull is implicit. Minimising or maximising a
linear functional over the hull reduces to a scan over the generators, which
is what every evaluation below relies on.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Tuple

from .errors import NotSimple, NullSignal, ShapeMismatch, UnknownLabel
from .lp import same_hull
from .numbers import fraction_matrix, fraction_vector, to_fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LabelSpace:
    """A finite, ordered set of distinct labels."""

    labels: Tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise ValueError(f"{type(self).__name__} needs at least one label")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {labels!r}")
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self.labels

    def index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"unknown {type(self).__name__} label {label!r}") from None


class StateSpace(LabelSpace):
    pass


class SignalSpace(LabelSpace):
    pass


def _as_states(states):
    return states if isinstance(states, StateSpace) else StateSpace(tuple(states))


def _as_signals(signals):
    return signals if isinstance(signals, SignalSpace) else SignalSpace(tuple(signals))


@dataclass(frozen=True)
class JointDistribution:
    """Probability masses ``mass[s][theta]`` over states x signals."""

    mass: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        mass = fraction_matrix(self.mass)
        if not mass or not mass[0] or any(len(row) != len(mass[0]) for row in mass):
            raise ShapeMismatch("joint distribution must be a non-ragged matrix")
        if any(v < 0 for row in mass for v in row):
            raise ValueError("negative probability mass")
        if sum(sum(row) for row in mass) != 1:
            raise ValueError("joint distribution does not sum to one")
        object.__setattr__(self, "mass", mass)

    @property
    def shape(self):
        return len(self.mass), len(self.mass[0])

    def state_marginal(self):
        return tuple(sum(row) for row in self.mass)

    def column(self, j):
        return tuple(row[j] for row in self.mass)

    def signal_mass(self, j):
        return sum(row[j] for row in self.mass)

    def conditional(self, j):
        """Bayes posterior over states given signal column ``j``."""
        total = self.signal_mass(j)
        if total == 0:
            raise NullSignal("signal has zero probability under this prior")
        return tuple(row[j] / total for row in self.mass)

    def flat(self):
        return tuple(v for row in self.mass for v in row)


@dataclass(frozen=True)
class Act:
    payoff: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "payoff", fraction_vector(self.payoff))

    def __len__(self):
        return len(self.payoff)


@dataclass(frozen=True)
class ExtendedAct:
    """Payoffs ``payoff[s][theta]`` on the extended state space."""

    payoff: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        payoff = fraction_matrix(self.payoff)
        if not payoff or any(len(row) != len(payoff[0]) for row in payoff):
            raise ShapeMismatch("extended act must be a non-ragged matrix")
        object.__setattr__(self, "payoff", payoff)

    @property
    def shape(self):
        return len(self.payoff), len(self.payoff[0])

    @classmethod
    def constant(cls, x, m, n):
        x = to_fraction(x)
        return cls(tuple((x,) * n for _ in range(m)))

    def with_cell(self, i, j, value):
        rows = [list(row) for row in self.payoff]
        rows[i][j] = to_fraction(value)
        return ExtendedAct(tuple(tuple(r) for r in rows))

    def column(self, j):
        return tuple(row[j] for row in self.payoff)


def as_extended_act(f):
    return f if isinstance(f, ExtendedAct) else ExtendedAct(f)


def as_act(f):
    return f if isinstance(f, Act) else Act(f)


@dataclass(frozen=True)
class ExtremePriorSet:
    """Convex hull of finitely many joint distributions over states x signals."""

    states: StateSpace
    signals: SignalSpace
    extremes: Tuple[JointDistribution, ...]

    def __post_init__(self):
        states = _as_states(self.states)
        signals = _as_signals(self.signals)
        extremes = tuple(p if isinstance(p, JointDistribution) else JointDistribution(p)
                         for p in self.extremes)
        if not extremes:
            raise ValueError("a prior set needs at least one extreme point")
        for p in extremes:
            if p.shape != (len(states), len(signals)):
                raise ShapeMismatch(
                    f"extreme of shape {p.shape} does not match "
                    f"{len(states)} states x {len(signals)} signals")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "extremes", extremes)

    @cached_property
    def is_simple(self):
        marginal = self.extremes[0].state_marginal()
        return all(p.state_marginal() == marginal for p in self.extremes[1:])

    @property
    def shape(self):
        return len(self.states), len(self.signals)

    def require_simple(self):
        if not self.is_simple:
            raise NotSimple("extreme points induce different priors over states")

    def max_mass(self, i, j):
        return max(p.mass[i][j] for p in self.extremes)

    def max_column(self, j):
        """Pointwise maximum of the ``j``-th column over the extreme points."""
        return tuple(self.max_mass(i, j) for i in range(len(self.states)))

    def evaluate(self, f):
        return evaluate_extended(self, f)


@dataclass(frozen=True)
class SimpleDecomposition:
    """A prior ``mu`` over states plus interpretations ``kernels[t][s][theta]``."""

    states: StateSpace
    signals: SignalSpace
    mu: Tuple[Fraction, ...]
    kernels: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        states = _as_states(self.states)
        signals = _as_signals(self.signals)
        mu = fraction_vector(self.mu)
        kernels = tuple(fraction_matrix(k) for k in self.kernels)
        if len(mu) != len(states):
            raise ShapeMismatch("prior length does not match the state space")
        if any(v < 0 for v in mu) or sum(mu) != 1:
            raise ValueError("prior over states must be a probability vector")
        if not kernels:
            raise ValueError("need at least one interpretation")
        for kernel in kernels:
            if len(kernel) != len(states) or any(len(row) != len(signals) for row in kernel):
                raise ShapeMismatch("kernel shape does not match states x signals")
            for row in kernel:
                if any(v < 0 for v in row) or sum(row) != 1:
                    raise ValueError("each kernel row must be a distribution over signals")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "kernels", kernels)

    def max_likelihood(self, j):
        """``max_t c^t(theta_j | s)`` for every state."""
        return tuple(max(k[i][j] for k in self.kernels) for i in range(len(self.states)))

    def compose(self):
        extremes = tuple(
            JointDistribution(tuple(tuple(self.mu[i] * v for v in row)
                                    for i, row in enumerate(kernel)))
            for kernel in self.kernels)
        return ExtremePriorSet(self.states, self.signals, extremes)


@dataclass(frozen=True)
class PosteriorSet:
    """Convex hull of finitely many beliefs over states.

    Entries are Fractions except for rules that need irrational powers, whose
    posteriors carry floats. ``mobius`` optionally records a belief-function
    representation (masses on subsets of states, by label).
    """

    states: StateSpace
    extremes: Tuple[Tuple, ...]
    mobius: dict = field(default=None, compare=False)

    def __post_init__(self):
        states = _as_states(self.states)
        extremes = []
        for vec in self.extremes:
            vec = tuple(v if isinstance(v, float) else to_fraction(v) for v in vec)
            if len(vec) != len(states):
                raise ShapeMismatch("posterior length does not match the state space")
            if any(v < 0 for v in vec):
                raise ValueError("negative posterior probability")
            total = sum(vec)
            if any(isinstance(v, float) for v in vec):
                if abs(total - 1) > 1e-9:
                    raise ValueError("posterior does not sum to one")
            elif total != 1:
                raise ValueError("posterior does not sum to one")
            if vec not in extremes:
                extremes.append(vec)
        if not extremes:
            raise ValueError("a posterior set needs at least one belief")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "extremes", tuple(extremes))

    @property
    def is_singleton(self):
        return len(self.extremes) == 1

    @property
    def is_exact(self):
        return not any(isinstance(v, float) for vec in self.extremes for v in vec)

    @property
    def belief(self):
        """The unique belief of a singleton set."""
        if not self.is_singleton:
            raise ValueError("posterior set is not a singleton")
        return self.extremes[0]

    def min_prob(self, i):
        return min(vec[i] for vec in self.extremes)

    def evaluate(self, f):
        return evaluate_act(self, f)

    def same_set(self, other, tol=1e-12):
        """Whether two posterior sets have the same convex hull."""
        if self.is_exact and other.is_exact:
            return same_hull(self.extremes, other.extremes)
        if self.is_singleton and other.is_singleton:
            return all(abs(a - b) <= tol for a, b in zip(self.belief, other.belief))
        raise NotImplementedError("hull comparison of inexact non-singleton sets")


def evaluate_extended(P: ExtremePriorSet, f) -> Fraction:
    """Max-min evaluation ``min_p sum p(s,theta) f(s,theta)`` over the prior set."""
    f = as_extended_act(f)
    if f.shape != P.shape:
        raise ShapeMismatch(f"act of shape {f.shape} vs prior set of shape {P.shape}")
    return min(sum(pv * fv for prow, frow in zip(p.mass, f.payoff)
                   for pv, fv in zip(prow, frow))
               for p in P.extremes)


def evaluate_act(Q: PosteriorSet, f):
    f = as_act(f)
    if len(f) != len(Q.states):
        raise ShapeMismatch("act length does not match the state space")
    return min(sum(q * x for q, x in zip(vec, f.payoff)) for vec in Q.extremes)


def decompose(P: ExtremePriorSet) -> SimpleDecomposition:
    """Split a simple prior set into a state prior and one kernel per extreme.

    States with zero prior mass get the uniform kernel.
    """
    P.require_simple()
    m, n = P.shape
    mu = P.extremes[0].state_marginal()
    uniform = tuple(Fraction(1, n) for _ in range(n))
    kernels = []
    for p in P.extremes:
        kernels.append(tuple(
            tuple(v / mu[i] for v in p.mass[i]) if mu[i] > 0 else uniform
            for i in range(m)))
    return SimpleDecomposition(P.states, P.signals, mu, tuple(kernels))


def compose(D: SimpleDecomposition) -> ExtremePriorSet:
    return D.compose()


def restrict(f, theta, signals: SignalSpace) -> Act:
    """The act ``s -> f(s, theta)``."""
    f = as_extended_act(f)
    signals = _as_signals(signals)
    if f.shape[1] != len(signals):
        raise ShapeMismatch("act width does not match the signal space")
    return Act(f.column(signals.index(theta)))


def non_null_signals(P: ExtremePriorSet):
    """Signals carrying positive mass under at least one extreme point, in order."""
    m, n = P.shape
    return tuple(P.signals.labels[j] for j in range(n)
                 if any(P.max_mass(i, j) > 0 for i in range(m)))


def require_non_null(P: ExtremePriorSet, theta):
    j = P.signals.index(theta)
    if not any(p.signal_mass(j) > 0 for p in P.extremes):
        raise NullSignal(f"signal {theta!r} is null under every prior")
    return j


def prior_set(states: Sequence, signals: Sequence, extremes: Sequence) -> ExtremePriorSet:
    """Convenience constructor from plain nested sequences."""
    return ExtremePriorSet(StateSpace(tuple(states)), SignalSpace(tuple(signals)),
                           tuple(JointDistribution(e) for e in extremes))
