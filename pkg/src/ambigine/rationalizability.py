"""When is a prior plus a family of posteriors generated by CML updating?

A profile ``(mu, {mu_theta})`` is rationalizable iff for every state ``s``

    sum_theta (mu_theta(s)/mu(s)) / max_s' (mu_theta(s')/mu(s')) >= 1.

The construction below turns a passing profile into explicit interpretations.
"""

from dataclasses import dataclass
from fractions import Fraction

from .core import PosteriorSet, SimpleDecomposition, SignalSpace, StateSpace
from .errors import NotRationalizable, ShapeMismatch
from .numbers import fraction_vector


@dataclass(frozen=True)
class BeliefProfile:
    """Strictly positive prior ``mu`` and one observed posterior per signal."""

    states: StateSpace
    mu: tuple
    posteriors: dict

    def __post_init__(self):
        states = self.states if isinstance(self.states, StateSpace) else StateSpace(tuple(self.states))
        mu = fraction_vector(self.mu)
        if len(mu) != len(states):
            raise ShapeMismatch("prior length does not match the state space")
        if sum(mu) != 1:
            raise ValueError("prior must sum to one")
        for s, p in zip(states, mu):
            if p <= 0:
                raise ValueError(f"prior mass of {s!r} is {p}; drop states the prior rules out")
        if not self.posteriors:
            raise ValueError("need at least one observed posterior")
        posteriors = {}
        for theta, q in dict(self.posteriors).items():
            q = fraction_vector(q)
            if len(q) != len(states):
                raise ShapeMismatch(f"posterior at {theta!r} has the wrong length")
            if any(v < 0 for v in q) or sum(q) != 1:
                raise ValueError(f"posterior at {theta!r} is not a probability vector")
            posteriors[theta] = q
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "posteriors", posteriors)

    def __hash__(self):
        return hash((self.states, self.mu, tuple(self.posteriors.items())))

    @property
    def signals(self):
        return SignalSpace(tuple(self.posteriors))

    @classmethod
    def from_posterior_sets(cls, states, mu, posterior_sets):
        """Build a profile from observed posterior sets; non-singletons are rejected."""
        posteriors = {}
        for theta, Q in posterior_sets.items():
            if isinstance(Q, PosteriorSet):
                if not Q.is_singleton:
                    raise NotRationalizable(
                        f"posterior set at {theta!r} is not a singleton; CML never produces one")
                Q = Q.belief
            posteriors[theta] = Q
        return cls(states, mu, posteriors)


@dataclass(frozen=True)
class RationalizabilityVerdict:
    rationalizable: bool
    sums: dict

    def __bool__(self):
        return self.rationalizable


def likelihood_terms(B: BeliefProfile):
    """``terms[theta][i] = (mu_theta(s_i)/mu(s_i)) / max_s' (mu_theta(s')/mu(s'))``."""
    terms = {}
    for theta, q in B.posteriors.items():
        ratios = [a / b for a, b in zip(q, B.mu)]
        top = max(ratios)
        terms[theta] = tuple(r / top for r in ratios)
    return terms


def is_rationalizable(B: BeliefProfile) -> RationalizabilityVerdict:
    terms = likelihood_terms(B)
    sums = {s: sum(t[i] for t in terms.values()) for i, s in enumerate(B.states)}
    return RationalizabilityVerdict(all(v >= 1 for v in sums.values()), sums)


def construct_interpretations(B: BeliefProfile) -> SimpleDecomposition:
    """One interpretation per observed signal, reproducing every posterior under CML.

    Interpretation ``theta`` puts the normalised likelihood ratio on ``theta``
    itself and fills the rest of each row greedily, in signal order, without
    exceeding the diagonal entry of any other interpretation. That cap keeps
    each diagonal entry the maximal likelihood of its signal.
    """
    verdict = is_rationalizable(B)
    if not verdict:
        short = [s for s, v in verdict.sums.items() if v < 1]
        raise NotRationalizable(f"likelihood budget below one at states {short!r}")
    terms = likelihood_terms(B)
    signals = list(B.posteriors)
    kernels = []
    for theta in signals:
        rows = []
        for i in range(len(B.states)):
            row = {theta: terms[theta][i]}
            deficit = 1 - row[theta]
            for other in signals:
                if other == theta:
                    continue
                give = min(terms[other][i], deficit)
                row[other] = give
                deficit -= give
            assert deficit == 0
            rows.append(tuple(row[t] for t in signals))
        kernels.append(tuple(rows))
    D = SimpleDecomposition(B.states, SignalSpace(tuple(signals)), B.mu, tuple(kernels))
    return D


def profile_of(D: SimpleDecomposition, signals=None) -> BeliefProfile:
    """Induced CML profile of a decomposition over its non-null signals."""
    posteriors = {}
    for j, theta in enumerate(D.signals):
        if signals is not None and theta not in signals:
            continue
        weights = [m * c for m, c in zip(D.mu, D.max_likelihood(j))]
        total = sum(weights)
        if total > 0:
            posteriors[theta] = tuple(w / total for w in weights)
    return BeliefProfile(D.states, D.mu, posteriors)


def zero_prior_states(mu):
    """Indices with zero prior mass, which must be dropped before building a profile."""
    return [i for i, p in enumerate(mu) if Fraction(p) == 0]
