"""Exact updating of ambiguous beliefs by conditional maximum likelihood.

The package evaluates max-min expected utility over finite prior sets,
implements CML next to the full-Bayesian, maximum-likelihood and proxy
rules, checks the updating axioms, decides CML rationalizability, and
builds ambiguous information designs.
"""

from .core import (
    Act,
    ExtendedAct,
    ExtremePriorSet,
    JointDistribution,
    PosteriorSet,
    SignalSpace,
    SimpleDecomposition,
    StateSpace,
    compose,
    decompose,
    evaluate_act,
    evaluate_extended,
    prior_set,
    restrict,
)
from .updating import (
    BLEND,
    CML,
    FB,
    ML,
    POWER,
    PROXY,
    MobiusBelief,
    UpdateRule,
    apply_rule,
    cml_update,
    cml_update_decomposed,
    fb_update,
    ml_update,
    parse_rule,
    proxy_update,
)

__all__ = [
    "Act",
    "ExtendedAct",
    "ExtremePriorSet",
    "JointDistribution",
    "PosteriorSet",
    "SignalSpace",
    "SimpleDecomposition",
    "StateSpace",
    "compose",
    "decompose",
    "evaluate_act",
    "evaluate_extended",
    "prior_set",
    "restrict",
    "BLEND",
    "CML",
    "FB",
    "ML",
    "POWER",
    "PROXY",
    "MobiusBelief",
    "UpdateRule",
    "apply_rule",
    "cml_update",
    "cml_update_decomposed",
    "fb_update",
    "ml_update",
    "parse_rule",
    "proxy_update",
]

__version__ = "0.1.0"
