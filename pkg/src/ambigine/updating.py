"""Updating rules: CML, full-Bayesian, maximum likelihood, proxy and two hybrids.

Every rule maps a prior representation and an observed signal to a
:class:`~ambigine.core.PosteriorSet`. Maxima over a prior set are taken over
its extreme points, which is exact for linear objectives.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional

from .core import (
    ExtremePriorSet,
    JointDistribution,
    PosteriorSet,
    SimpleDecomposition,
    StateSpace,
    SignalSpace,
    as_extended_act,
    decompose,
    non_null_signals,
    require_non_null,
)
from .errors import InvalidMobius, NullSignal, UnknownLabel
from .numbers import to_fraction


# -- belief functions -------------------------------------------------------

@dataclass(frozen=True)
class MobiusBelief:
    """Totally monotone capacity on states x signals given by Mobius masses.

    ``masses`` maps frozensets of ``(state, signal)`` label pairs to
    nonnegative rationals summing to one. The represented prior set is
    ``sum_E alpha_E * Delta(E)``.
    """

    states: StateSpace
    signals: SignalSpace
    masses: dict

    def __post_init__(self):
        states = self.states if isinstance(self.states, StateSpace) else StateSpace(tuple(self.states))
        signals = (self.signals if isinstance(self.signals, SignalSpace)
                   else SignalSpace(tuple(self.signals)))
        masses = {}
        for event, alpha in dict(self.masses).items():
            event = frozenset(tuple(cell) for cell in event)
            alpha = to_fraction(alpha)
            if not event:
                raise InvalidMobius("mass on the empty set")
            for s, theta in event:
                if s not in states or theta not in signals:
                    raise InvalidMobius(f"cell {(s, theta)!r} outside states x signals")
            if alpha < 0:
                raise InvalidMobius(f"negative mass {alpha} on {sorted(event)!r}")
            if alpha:
                masses[event] = masses.get(event, Fraction(0)) + alpha
        if sum(masses.values()) != 1:
            raise InvalidMobius("Mobius masses must sum to one")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "masses", masses)

    def __hash__(self):
        return hash((self.states, self.signals, frozenset(self.masses.items())))

    def _cell_value(self, f, cell):
        return f.payoff[self.states.index(cell[0])][self.signals.index(cell[1])]

    def evaluate(self, f):
        """Lower expectation over the core: ``sum_E alpha_E min_{x in E} f(x)``."""
        f = as_extended_act(f)
        return sum(alpha * min(self._cell_value(f, cell) for cell in event)
                   for event, alpha in self.masses.items())

    def core_extremes(self):
        """Vertices of the core, one per ordering of the cells (deduplicated)."""
        cells = sorted({cell for event in self.masses for cell in event},
                       key=lambda c: (self.states.index(c[0]), self.signals.index(c[1])))
        m, n = len(self.states), len(self.signals)
        found = {}
        for order in permutations(cells):
            rank = {cell: k for k, cell in enumerate(order)}
            mass = [[Fraction(0)] * n for _ in range(m)]
            for event, alpha in self.masses.items():
                s, theta = min(event, key=rank.__getitem__)
                mass[self.states.index(s)][self.signals.index(theta)] += alpha
            key = tuple(tuple(row) for row in mass)
            found.setdefault(key, None)
        return tuple(JointDistribution(k) for k in found)

    def to_prior_set(self):
        return ExtremePriorSet(self.states, self.signals, self.core_extremes())

    def non_null_signals(self):
        return tuple(theta for theta in self.signals
                     if any(cell[1] == theta for event in self.masses for cell in event))


def belief_core(states: StateSpace, masses: dict):
    """Vertices of the core of a belief function on ``states`` (masses keyed by label sets)."""
    labels = list(states)
    support = sorted({s for event in masses for s in event}, key=labels.index)
    found = {}
    for order in permutations(support):
        rank = {s: k for k, s in enumerate(order)}
        vec = [Fraction(0)] * len(labels)
        for event, alpha in masses.items():
            vec[labels.index(min(event, key=rank.__getitem__))] += alpha
        found.setdefault(tuple(vec), None)
    return tuple(found)


# -- rules -------------------------------------------------------------------

CML_TAG, FB_TAG, ML_TAG, PROXY_TAG, BLEND_TAG, POWER_TAG = (
    "cml", "fb", "ml", "proxy", "blend", "power")


@dataclass(frozen=True)
class UpdateRule:
    tag: str
    lam: Optional[Fraction] = None

    def __post_init__(self):
        if self.tag not in (CML_TAG, FB_TAG, ML_TAG, PROXY_TAG, BLEND_TAG, POWER_TAG):
            raise ValueError(f"unknown rule {self.tag!r}")
        if self.tag == POWER_TAG:
            lam = to_fraction(self.lam)
            if not 0 < lam < 1:
                raise ValueError("power rule needs lambda in (0, 1)")
            object.__setattr__(self, "lam", lam)
        elif self.lam is not None:
            raise ValueError(f"rule {self.tag!r} takes no parameter")

    def __str__(self):
        return f"power:{self.lam}" if self.tag == POWER_TAG else self.tag


CML = UpdateRule(CML_TAG)
FB = UpdateRule(FB_TAG)
ML = UpdateRule(ML_TAG)
PROXY = UpdateRule(PROXY_TAG)
BLEND = UpdateRule(BLEND_TAG)


def POWER(lam):
    return UpdateRule(POWER_TAG, lam)


def parse_rule(text):
    """Parse ``cml``, ``fb``, ``ml``, ``proxy``, ``blend`` or ``power:<lambda>``."""
    text = text.strip().lower()
    if text.startswith("power"):
        _, _, lam = text.partition(":")
        if not lam:
            raise ValueError("power rule needs a parameter, e.g. power:1/2")
        return POWER(lam)
    return UpdateRule(text)


def _posterior_from_weights(weights):
    total = sum(weights)
    if total == 0:
        raise NullSignal("all conditional likelihoods vanish")
    return tuple(w / total for w in weights)


def cml_update(P: ExtremePriorSet, theta) -> PosteriorSet:
    """Conditional maximum likelihood: ``mu_theta(s) ∝ max_p p(s, theta)``."""
    P.require_simple()
    j = P.signals.index(theta)
    weights = P.max_column(j)
    if sum(weights) == 0:
        raise NullSignal(f"signal {theta!r} is null under every prior")
    return PosteriorSet(P.states, (_posterior_from_weights(weights),))


def cml_update_decomposed(D: SimpleDecomposition, theta) -> PosteriorSet:
    """Same posterior from ``mu(s) * max_t c^t(theta|s)``."""
    j = D.signals.index(theta)
    weights = tuple(mu * c for mu, c in zip(D.mu, D.max_likelihood(j)))
    if sum(weights) == 0:
        raise NullSignal(f"signal {theta!r} is null under every interpretation")
    return PosteriorSet(D.states, (_posterior_from_weights(weights),))


def fb_update(P: ExtremePriorSet, theta) -> PosteriorSet:
    """Full-Bayesian updating: conditionals of every generator with mass on ``theta``.

    Generators with zero mass on ``theta`` only matter in the closure, which
    the remaining conditionals already span.
    """
    j = require_non_null(P, theta)
    return PosteriorSet(P.states, tuple(p.conditional(j) for p in P.extremes
                                        if p.signal_mass(j) > 0))


def ml_update(P: ExtremePriorSet, theta) -> PosteriorSet:
    """Maximum-likelihood updating: condition only the priors maximising ``p(S x theta)``."""
    j = require_non_null(P, theta)
    best = max(p.signal_mass(j) for p in P.extremes)
    return PosteriorSet(P.states, tuple(p.conditional(j) for p in P.extremes
                                        if p.signal_mass(j) == best))


def blend_weight(P: ExtremePriorSet, theta):
    return sum(P.max_column(P.signals.index(theta)))


def blend_cml_fb_update(P: ExtremePriorSet, theta) -> PosteriorSet:
    """Mix the CML posterior and the FB set with weight ``w = sum_s max_p p(s,theta)``."""
    mu_theta = cml_update(P, theta).belief
    w = blend_weight(P, theta)
    # simple sets give w <= sum_s mu(s) = 1
    if w > 1:
        raise AssertionError(f"blend weight {w} exceeds one")
    fb = fb_update(P, theta)
    return PosteriorSet(P.states, tuple(
        tuple(w * a + (1 - w) * b for a, b in zip(mu_theta, q)) for q in fb.extremes))


def power_update(D, theta, lam) -> PosteriorSet:
    """``mu(s) * (max_t c^t(theta|s))**lam``, normalised; float valued.

    ``lam == 1`` is accepted as the degenerate case and returns the exact CML
    posterior.
    """
    if isinstance(D, ExtremePriorSet):
        D = decompose(D)
    lam = to_fraction(lam)
    if not 0 < lam <= 1:
        raise ValueError("lambda must lie in (0, 1]")
    if lam == 1:
        return cml_update_decomposed(D, theta)
    j = D.signals.index(theta)
    weights = [float(mu) * float(c) ** float(lam) if c > 0 else 0.0
               for mu, c in zip(D.mu, D.max_likelihood(j))]
    total = sum(weights)
    if total == 0:
        raise NullSignal(f"signal {theta!r} is null under every interpretation")
    return PosteriorSet(D.states, (tuple(w / total for w in weights),))


def proxy_masses(B: MobiusBelief, theta):
    """Posterior Mobius masses over subsets of states after observing ``theta``.

    Each focal set ``E`` keeps the fraction ``|E ∩ (S x theta)| / |E|`` of its
    mass; masses landing on the same subset accumulate.
    """
    if theta not in B.signals:
        raise UnknownLabel(f"unknown signal {theta!r}")
    weights = {}
    for event, alpha in B.masses.items():
        hit = frozenset(s for s, t in event if t == theta)
        if hit:
            weights[hit] = weights.get(hit, Fraction(0)) + alpha * len(hit) / len(event)
    total = sum(weights.values())
    if total == 0:
        raise NullSignal(f"signal {theta!r} is null under the belief function")
    return {event: w / total for event, w in weights.items()}


def proxy_update(B: MobiusBelief, theta) -> PosteriorSet:
    masses = proxy_masses(B, theta)
    return PosteriorSet(B.states, belief_core(B.states, masses), mobius=masses)


# -- dispatch ----------------------------------------------------------------

def as_prior_set(prior):
    if isinstance(prior, MobiusBelief):
        return prior.to_prior_set()
    if isinstance(prior, SimpleDecomposition):
        return prior.compose()
    return prior


def apply_rule(rule: UpdateRule, prior, theta) -> PosteriorSet:
    """Posterior set of ``prior`` (prior set, decomposition or belief) under ``rule``."""
    if rule.tag == PROXY_TAG:
        if not isinstance(prior, MobiusBelief):
            raise TypeError("the proxy rule needs a MobiusBelief")
        return proxy_update(prior, theta)
    if rule.tag == POWER_TAG:
        if not isinstance(prior, SimpleDecomposition):
            prior = decompose(as_prior_set(prior))
        return power_update(prior, theta, rule.lam)
    P = as_prior_set(prior)
    if rule.tag == CML_TAG:
        return cml_update(P, theta)
    if rule.tag == FB_TAG:
        return fb_update(P, theta)
    if rule.tag == ML_TAG:
        return ml_update(P, theta)
    return blend_cml_fb_update(P, theta)


def ex_ante_value(prior, f):
    """Max-min evaluation of an extended act under any prior representation."""
    if isinstance(prior, SimpleDecomposition):
        prior = prior.compose()
    return prior.evaluate(f)


def prior_non_null_signals(prior):
    if isinstance(prior, MobiusBelief):
        return prior.non_null_signals()
    return non_null_signals(as_prior_set(prior))
