"""Independent signals, ambiguous accuracy and long-run learning under CML."""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .core import PosteriorSet, SignalSpace, SimpleDecomposition, StateSpace
from .errors import NullSignal, PreconditionFailed, ShapeMismatch
from .numbers import to_fraction
from .updating import cml_update_decomposed


# -- product structures ------------------------------------------------------

@dataclass(frozen=True)
class ProductStructure:
    """Two interpretation families over a common prior, drawn independently.

    Interpretation ``(t, t2)`` of the pair signal ``(theta, theta2)`` is
    ``c^t(theta|s) * c^t2(theta2|s)``.
    """

    first: SimpleDecomposition
    second: SimpleDecomposition

    def __post_init__(self):
        if self.first.states != self.second.states:
            raise ShapeMismatch("the two families must share the state space")
        if self.first.mu != self.second.mu:
            raise ValueError("the two families must share the prior")

    @property
    def states(self):
        return self.first.states

    @property
    def mu(self):
        return self.first.mu


def _posterior(states, weights, what):
    total = sum(weights)
    if total == 0:
        raise NullSignal(f"{what} is null")
    return PosteriorSet(states, (tuple(w / total for w in weights),))


def joint_update(PS: ProductStructure, theta, theta2) -> PosteriorSet:
    """CML at the pair signal, using that the maximum of a product factorises."""
    top1 = PS.first.max_likelihood(PS.first.signals.index(theta))
    top2 = PS.second.max_likelihood(PS.second.signals.index(theta2))
    weights = [m * a * b for m, a, b in zip(PS.mu, top1, top2)]
    return _posterior(PS.states, weights, f"signal {(theta, theta2)!r}")


def _reprior(D: SimpleDecomposition, mu):
    return SimpleDecomposition(D.states, D.signals, mu, D.kernels)


def sequential_update(PS: ProductStructure, theta, theta2, first_signal_first=True) -> PosteriorSet:
    """Apply CML twice, to ``theta`` then ``theta2`` (or the reverse order)."""
    steps = [(PS.first, theta), (PS.second, theta2)]
    if not first_signal_first:
        steps.reverse()
    mu = PS.mu
    for D, signal in steps:
        mu = cml_update_decomposed(_reprior(D, mu), signal).belief
    return PosteriorSet(PS.states, (mu,))


def product_decomposition(PS: ProductStructure) -> SimpleDecomposition:
    """The materialised product family over pair signals (for cross-checks)."""
    D1, D2 = PS.first, PS.second
    signals = SignalSpace(tuple(product(D1.signals, D2.signals)))
    kernels = []
    for k1, k2 in product(D1.kernels, D2.kernels):
        kernels.append(tuple(tuple(a * b for a, b in product(r1, r2))
                             for r1, r2 in zip(k1, k2)))
    return SimpleDecomposition(PS.states, signals, PS.mu, tuple(kernels))


# -- ambiguous accuracy ------------------------------------------------------

@dataclass(frozen=True)
class AccuracyModel:
    """Binary states and signals read with accuracy ``H`` or ``L``.

    ``lambda_true`` is the accuracy of the process that actually generates
    signals; ``true_state`` is 0 for ``s1`` and 1 for ``s2``.
    """

    H: Fraction
    L: Fraction
    alpha: Fraction = Fraction(1, 2)
    lambda_true: Fraction = Fraction(1, 2)
    true_state: int = 0

    def __post_init__(self):
        H, L = to_fraction(self.H), to_fraction(self.L)
        alpha, lam = to_fraction(self.alpha), to_fraction(self.lambda_true)
        if not 0 < L < H < 1:
            raise PreconditionFailed("need 0 < L < H < 1")
        if H + L < 1:
            raise PreconditionFailed("need H + L >= 1 (swap the signal labels otherwise)")
        if not 0 < alpha < 1:
            raise PreconditionFailed("alpha must lie in (0, 1)")
        if not 0 < lam <= 1:
            raise PreconditionFailed("true accuracy must lie in (0, 1]")
        if self.true_state not in (0, 1):
            raise PreconditionFailed("true_state is 0 or 1")
        for name, value in (("H", H), ("L", L), ("alpha", alpha), ("lambda_true", lam)):
            object.__setattr__(self, name, value)

    @property
    def likelihood_ratio(self):
        return self.H / (1 - self.L)

    @property
    def perceived_accuracy(self):
        return self.H / (self.H + 1 - self.L)


STATES = StateSpace(("s1", "s2"))
SIGNALS = SignalSpace(("theta1", "theta2"))


def _symmetric_kernel(acc):
    return ((acc, 1 - acc), (1 - acc, acc))


def accuracy_decomposition(M: AccuracyModel) -> SimpleDecomposition:
    """The two interpretations ``c^H`` and ``c^L`` under prior ``(alpha, 1-alpha)``."""
    return SimpleDecomposition(STATES, SIGNALS, (M.alpha, 1 - M.alpha),
                               (_symmetric_kernel(M.H), _symmetric_kernel(M.L)))


def average_decomposition(M: AccuracyModel) -> SimpleDecomposition:
    """The unambiguous benchmark with accuracy ``(H+L)/2``."""
    return SimpleDecomposition(STATES, SIGNALS, (M.alpha, 1 - M.alpha),
                               (_symmetric_kernel((M.H + M.L) / 2),))


@dataclass(frozen=True)
class UnderReactionVerdict:
    under_reacts: bool
    ambiguous: dict
    benchmark: dict
    note: str = ""

    def __bool__(self):
        return self.under_reacts


def check_under_reaction(M: AccuracyModel) -> UnderReactionVerdict:
    """Does CML move less toward the signalled state than the averaged benchmark?

    At ``H + L = 1`` neither structure moves the prior, so the answer is
    false and a note says why.
    """
    amb, ref = accuracy_decomposition(M), average_decomposition(M)
    ambiguous = {t: cml_update_decomposed(amb, t).belief for t in SIGNALS}
    benchmark = {t: cml_update_decomposed(ref, t).belief for t in SIGNALS}
    if M.H + M.L == 1:
        return UnderReactionVerdict(False, ambiguous, benchmark,
                                    "H + L = 1: posteriors equal the prior for every signal")
    # signal theta_i is good news for s_i; under-reaction means a smaller move
    moves_less = all(ambiguous[t][i] < benchmark[t][i] and ambiguous[t][1 - i] > benchmark[t][1 - i]
                     for i, t in enumerate(SIGNALS))
    return UnderReactionVerdict(moves_less, ambiguous, benchmark)


# -- learning ----------------------------------------------------------------

@dataclass(frozen=True)
class LearningPath:
    """One simulated signal sequence and the implied CML beliefs.

    Because every update multiplies the odds by ``rho`` or ``1/rho``, the
    belief after ``k`` signals depends only on the net count
    ``#theta1 - #theta2`` so far; ``net[k]`` stores it (``net[0] = 0``).
    """

    model: AccuracyModel
    seed: int
    signals: np.ndarray = field(repr=False)
    net: np.ndarray = field(repr=False)

    @property
    def horizon(self):
        return len(self.signals)

    def belief_at(self, k) -> Fraction:
        """Exact belief on ``s1`` after ``k`` signals."""
        odds = self.model.alpha / (1 - self.model.alpha) * self.model.likelihood_ratio ** int(self.net[k])
        return odds / (1 + odds)

    @property
    def terminal(self) -> Fraction:
        return self.belief_at(self.horizon)

    def terminal_on_true_state(self) -> Fraction:
        b = self.terminal
        return b if self.model.true_state == 0 else 1 - b

    def beliefs(self) -> np.ndarray:
        """Float beliefs on ``s1`` along the path (computed on the log-odds scale)."""
        log_prior = math.log(self.model.alpha) - math.log(1 - self.model.alpha)
        log_rho = math.log(self.model.likelihood_ratio)
        z = log_prior + self.net * log_rho
        return 1.0 / (1.0 + np.exp(-z))


def simulate_learning(M: AccuracyModel, horizon: int, seed: int) -> LearningPath:
    """Draw ``horizon`` i.i.d. signals at the true state and track CML beliefs.

    Signals are coded 0 for ``theta1`` and 1 for ``theta2``; draws use a
    Philox generator keyed by ``seed``.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    rng = np.random.Generator(np.random.Philox(seed))
    correct = rng.random(horizon) < float(M.lambda_true)
    signals = np.where(correct, M.true_state, 1 - M.true_state).astype(np.int8)
    steps = np.where(signals == 0, 1, -1)
    net = np.concatenate(([0], np.cumsum(steps))).astype(np.int64)
    return LearningPath(M, seed, signals, net)


@dataclass(frozen=True)
class LearningSummary:
    model: AccuracyModel
    horizon: int
    seeds: tuple
    terminal_on_true: tuple
    threshold: float

    @property
    def learned(self):
        return sum(1 for b in self.terminal_on_true if b >= self.threshold)

    @property
    def mislearned(self):
        return sum(1 for b in self.terminal_on_true if b <= 1 - self.threshold)

    @property
    def undecided(self):
        return len(self.seeds) - self.learned - self.mislearned


def run_learning(M: AccuracyModel, horizon, seeds, threshold=0.99):
    """Simulate one path per seed; returns the paths and a summary."""
    paths = [simulate_learning(M, horizon, s) for s in seeds]
    terminal = tuple(float(p.terminal_on_true_state()) for p in paths)
    return paths, LearningSummary(M, horizon, tuple(seeds), terminal, threshold)
