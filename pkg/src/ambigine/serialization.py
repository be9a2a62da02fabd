"""JSON instance files: a versioned envelope ``{schema, kind, body}``.

Numbers may be JSON integers, decimal strings or ``"a/b"`` strings; JSON
floats are read through their shortest repr, so ``0.1`` means ``1/10``.
"""

import json
from fractions import Fraction
from pathlib import Path

from .core import ExtremePriorSet, SimpleDecomposition, prior_set
from .design import PersuasionInstance
from .dynamics import ProductStructure
from .errors import AmbigineError
from .numbers import fraction_matrix, fraction_vector, render, to_fraction
from .rationalizability import BeliefProfile
from .updating import MobiusBelief

SCHEMA = "ambigine/v1"
KINDS = ("prior_set", "decomposition", "mobius", "profile", "product", "persuasion")


class InstanceError(AmbigineError):
    """The instance file does not match the expected envelope or body."""


def _require(body, *keys):
    missing = [k for k in keys if k not in body]
    if missing:
        raise InstanceError(f"missing field(s) {missing}")


def _prior_set(body):
    _require(body, "states", "signals", "extremes")
    return prior_set(body["states"], body["signals"], body["extremes"])


def _decomposition(body):
    _require(body, "states", "signals", "mu", "kernels")
    return SimpleDecomposition(tuple(body["states"]), tuple(body["signals"]),
                               fraction_vector(body["mu"]),
                               tuple(fraction_matrix(k) for k in body["kernels"]))


def _mobius(body):
    _require(body, "states", "signals", "masses")
    masses = {}
    for entry in body["masses"]:
        event = frozenset(tuple(cell) for cell in entry["cells"])
        masses[event] = masses.get(event, Fraction(0)) + to_fraction(entry["mass"])
    return MobiusBelief(tuple(body["states"]), tuple(body["signals"]), masses)


def _profile(body):
    _require(body, "states", "mu", "posteriors")
    return BeliefProfile(tuple(body["states"]), body["mu"], dict(body["posteriors"]))


def _product(body):
    _require(body, "first", "second")
    return ProductStructure(_decomposition(body["first"]), _decomposition(body["second"]))


def _persuasion(body):
    _require(body, "states", "actions", "u", "v", "mu")
    return PersuasionInstance(tuple(body["states"]), tuple(body["actions"]),
                              body["u"], body["v"], body["mu"])


_PARSERS = {
    "prior_set": _prior_set,
    "decomposition": _decomposition,
    "mobius": _mobius,
    "profile": _profile,
    "product": _product,
    "persuasion": _persuasion,
}


def parse_body(kind, body):
    if kind not in _PARSERS:
        raise InstanceError(f"unknown kind {kind!r}; expected one of {KINDS}")
    try:
        return _PARSERS[kind](body)
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"malformed {kind} body: {exc}") from exc


def load_document(source):
    """Read an envelope from a path, a JSON string or an already-parsed dict."""
    if isinstance(source, dict):
        doc = source
    else:
        text = Path(source).read_text() if not str(source).lstrip().startswith("{") else source
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise InstanceError(f"expected an envelope with schema {SCHEMA!r}")
    _require(doc, "kind", "body")
    return doc


def load_instance(source, expect=None):
    """Return ``(kind, object, document)`` for an instance envelope."""
    doc = load_document(source)
    kind = doc["kind"]
    if expect is not None and kind not in expect:
        raise InstanceError(f"expected kind in {tuple(expect)}, got {kind!r}")
    return kind, parse_body(kind, doc["body"]), doc


def envelope(kind, body):
    return {"schema": SCHEMA, "kind": kind, "body": body}


def to_jsonable(value, as_float=False):
    """Recursively make ``value`` JSON-ready.

    Fractions become ``"a/b"`` strings (JSON numbers with ``as_float``);
    plain ints and floats stay numbers; tuples and sets become lists.
    """
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    if isinstance(value, Fraction):
        return float(value) if as_float else render(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v, as_float) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=repr) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v, as_float) for v in items]
    return str(value)


def dumps(value, as_float=False):
    return json.dumps(to_jsonable(value, as_float), indent=2, sort_keys=False)


def prior_set_body(P: ExtremePriorSet):
    return {"states": list(P.states), "signals": list(P.signals),
            "extremes": [[[render(x) for x in row] for row in p.mass] for p in P.extremes]}


def decomposition_body(D: SimpleDecomposition):
    return {"states": list(D.states), "signals": list(D.signals),
            "mu": [render(x) for x in D.mu],
            "kernels": [[[render(x) for x in row] for row in k] for k in D.kernels]}
