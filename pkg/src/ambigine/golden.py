"""Worked examples shipped as data files, recomputed and compared exactly."""

import json
from dataclasses import dataclass, field
from importlib import resources

from .axioms import IsuWitness, check_not_all_news_bad, isu_feasibility_bounds
from .core import ExtendedAct, evaluate_act, restrict
from .design import action_frequencies, construct_epsilon
from .lp import in_hull
from .numbers import fraction_matrix, fraction_vector, to_fraction
from .rationalizability import is_rationalizable
from .serialization import parse_body
from .updating import CML, FB, ML, PROXY, apply_rule, ex_ante_value

EXAMPLE_IDS = ("1", "2", "3", "4", "5", "6", "design")


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    actual: object

    @property
    def ok(self):
        return self.expected == self.actual


@dataclass
class ExampleReport:
    example: str
    provenance: str
    checks: list = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def check(self, name, expected, actual):
        self.checks.append(Check(name, expected, actual))


def load_example(example):
    name = f"example{example}.json" if example != "design" else "design.json"
    text = resources.files("ambigine").joinpath("data", name).read_text()
    return json.loads(text)


def _vec(values):
    return fraction_vector(values)


def _vecs(rows):
    return {tuple(fraction_vector(r)) for r in rows}


def _isu_witness(prior, theta, f, g, rule, cell):
    Q = apply_rule(rule, prior, theta)
    signals = prior.signals
    return IsuWitness(f, g, cell, ex_ante_value(prior, f), ex_ante_value(prior, g),
                      evaluate_act(Q, restrict(f, theta, signals)),
                      evaluate_act(Q, restrict(g, theta, signals)))


def _example1(doc, report):
    P = parse_body(doc["kind"], doc["body"])
    theta, exp = doc["signal"], doc["expected"]
    cml = apply_rule(CML, P, theta).belief
    fb = apply_rule(FB, P, theta).extremes
    report.values.update(cml=cml, fb=fb)
    report.check("cml posterior", _vec(exp["cml"]), cml)
    report.check("fb extremes", _vecs(exp["fb"]), set(fb))
    report.check("cml inside fb hull", exp["cml_in_fb_hull"], in_hull(cml, fb))


def _example2(doc, report):
    P = parse_body(doc["kind"], doc["body"])
    theta, exp = doc["signal"], doc["expected"]
    f, g = (ExtendedAct(fraction_matrix(doc["acts"][k])) for k in ("f", "g"))
    report.check("V(f*)", to_fraction(exp["v_f"]), ex_ante_value(P, f))
    report.check("V(g*)", to_fraction(exp["v_g"]), ex_ante_value(P, g))
    report.check("cml posterior", _vec(exp["cml"]), apply_rule(CML, P, theta).belief)
    report.check("fb extremes", _vecs(exp["fb"]), set(apply_rule(FB, P, theta).extremes))
    report.check("ml extremes", _vecs(exp["ml"]), set(apply_rule(ML, P, theta).extremes))
    fb = apply_rule(FB, P, theta)
    report.check("fb ex-post f*", to_fraction(exp["fb_post_f"]), evaluate_act(fb, restrict(f, theta, P.signals)))
    report.check("fb ex-post g*", to_fraction(exp["fb_post_g"]), evaluate_act(fb, restrict(g, theta, P.signals)))
    for tag, rule in (("fb", FB), ("ml", ML), ("cml", CML)):
        w = _isu_witness(P, theta, f, g, rule, ("s", theta))
        report.check(f"ISU violated by {tag}", exp["isu_violated"][tag], w.is_violation)


def _example3(doc, report):
    B = parse_body(doc["kind"], doc["body"])
    verdict = is_rationalizable(B)
    report.values.update(sums=verdict.sums)
    report.check("rationalizable", doc["expected"]["rationalizable"], verdict.rationalizable)
    report.check("sum at s", to_fraction(doc["expected"]["sum_s"]), verdict.sums["s"])


def _example4(doc, report):
    P = parse_body(doc["kind"], doc["body"])
    result = isu_feasibility_bounds(P, doc["signal"])
    exp = doc["expected"]
    report.check("bounds", {k: to_fraction(v) for k, v in exp["bounds"].items()}, result.bounds)
    report.check("feasible", exp["feasible"], result.feasible)


def _example5(doc, report):
    B = parse_body(doc["kind"], doc["body"])
    exp = doc["expected"]
    P = B.to_prior_set()
    report.check("core equals table", {fraction_matrix(p) for p in doc["table"]},
                 {p.mass for p in P.extremes})
    for theta, q in exp["cml"].items():
        report.check(f"cml posterior at {theta}", _vec(q), apply_rule(CML, P, theta).belief)
    f = ExtendedAct(fraction_matrix(doc["acts"]["f"]))
    report.check("V(f*)", to_fraction(exp["v_f"]), ex_ante_value(B, f))
    report.check("proxy posterior at theta", _vec(exp["proxy"]), apply_rule(PROXY, B, "theta").belief)
    report.check("not all news bad (cml)", exp["not_all_news_bad"]["cml"], check_not_all_news_bad(P, f, CML))
    report.check("not all news bad (proxy)", exp["not_all_news_bad"]["proxy"],
                 check_not_all_news_bad(B, f, PROXY))


def _example6(doc, report):
    B = parse_body(doc["kind"], doc["body"])
    theta, exp = doc["signal"], doc["expected"]
    report.check("core equals table", {fraction_matrix(p) for p in doc["table"]},
                 {p.mass for p in B.to_prior_set().extremes})
    report.check("proxy posterior", _vec(exp["proxy"]), apply_rule(PROXY, B, theta).belief)
    f, g = (ExtendedAct(fraction_matrix(doc["acts"][k])) for k in ("f", "g"))
    w = _isu_witness(B, theta, f, g, PROXY, ("s'", theta))
    report.check("V(f*)", to_fraction(exp["v_f"]), w.v_f)
    report.check("ex-post f*", to_fraction(exp["v_f_post"]), w.v_f_post)
    report.check("V(g*)", to_fraction(exp["v_g"]), w.v_g)
    report.check("ex-post g*", to_fraction(exp["v_g_post"]), w.v_g_post)
    report.check("ISU violated by proxy", exp["isu_violated"], w.is_violation)


def _design(doc, report):
    I = parse_body(doc["kind"], doc["body"])
    exp = doc["expected"]
    cert = construct_epsilon(I, to_fraction(doc["epsilon"]), targets=doc["targets"],
                             r=_vec(doc["r"]), N=doc["N"])
    G = cert.structure
    block = G.describe()[0]
    report.values.update(v_star=cert.v_star, ideal=cert.ideal, N=G.N)
    report.check("own-signal likelihoods", _vec(exp["diag_s1"]), tuple(block["diag"]))
    report.check("same-state remainder", to_fraction(exp["offdiag_same_state"]), block["offdiag_same_state"])
    report.check("cross remainder", to_fraction(exp["cross"]), block["cross"][1])
    freq = action_frequencies(I, G, cert.actions_at_signal, "s1")
    actual = {"s1": freq["s1"][cert.actions_at_signal["s1"]], "s2": freq["s2"][cert.actions_at_signal["s2"]]}
    report.check("designer-preferred action frequencies",
                 {k: to_fraction(v) for k, v in exp["frequencies"].items()}, actual)
    report.check("posteriors", {k: _vec(v) for k, v in exp["posteriors"].items()}, cert.posteriors)
    report.check("own signal is the unique maximiser", True, G.own_is_unique_max())


_RUNNERS = {"1": _example1, "2": _example2, "3": _example3, "4": _example4,
            "5": _example5, "6": _example6, "design": _design}


def run_example(example) -> ExampleReport:
    example = str(example)
    if example not in _RUNNERS:
        raise KeyError(f"unknown example {example!r}; choose from {EXAMPLE_IDS}")
    doc = load_example(example)
    report = ExampleReport(example, doc.get("provenance", ""))
    _RUNNERS[example](doc, report)
    return report


def run_all():
    return [run_example(e) for e in EXAMPLE_IDS]

