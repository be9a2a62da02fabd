"""Command line front end: ``ambigine <subcommand> ...``.

Every subcommand prints one JSON document (or a plain listing with
``--pretty``). Exit status: 0 on success, 2 on invalid input, 3 when
``--strict`` is set and the computed verdict is negative, 64 on usage errors.
"""

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .axioms import check_iis, check_not_all_news_bad, check_rc_pair, search_isu_violation
from .core import ExtendedAct, evaluate_act, restrict
from .design import attainable_actions, construct_epsilon
from .dynamics import AccuracyModel, joint_update, run_learning, sequential_update
from .errors import AmbigineError
from .golden import EXAMPLE_IDS, run_example
from .numbers import fraction_matrix, fraction_vector, to_fraction
from .rationalizability import construct_interpretations, is_rationalizable
from .serialization import SCHEMA, decomposition_body, load_instance, to_jsonable
from .updating import apply_rule, ex_ante_value, parse_rule

EXIT_OK, EXIT_INVALID, EXIT_NEGATIVE, EXIT_USAGE = 0, 2, 3, 64
PRIOR_KINDS = ("prior_set", "decomposition", "mobius")

log = logging.getLogger("ambigine")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_matrix(text):
    """An act given inline as a JSON matrix or as a path to a JSON file."""
    if not text.lstrip().startswith("["):
        text = Path(text).read_text()
    return ExtendedAct(fraction_matrix(json.loads(text)))


def _posterior_payload(Q):
    body = {"extremes": Q.extremes, "singleton": Q.is_singleton}
    if Q.is_singleton:
        body["belief"] = Q.belief
    if Q.mobius is not None:
        body["mobius"] = [{"states": sorted(event, key=list(Q.states).index), "mass": w}
                          for event, w in Q.mobius.items()]
    return body


def _prior(path):
    kind, prior, _ = load_instance(path, expect=PRIOR_KINDS)
    return prior


def cmd_update(args):
    rule = parse_rule(args.rule)
    prior = _prior(args.instance)
    Q = apply_rule(rule, prior, args.signal)
    return {"rule": str(rule), "signal": args.signal, "states": list(Q.states),
            "posterior": _posterior_payload(Q)}, True


def cmd_eval(args):
    prior = _prior(args.instance)
    f = _read_matrix(args.act)
    out = {"ex_ante": ex_ante_value(prior, f)}
    if args.signal is not None:
        rule = parse_rule(args.rule)
        Q = apply_rule(rule, prior, args.signal)
        out.update(rule=str(rule), signal=args.signal,
                   ex_post=evaluate_act(Q, restrict(f, args.signal, prior.signals)))
    return out, True


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this axiom")


def cmd_axioms(args):
    rule = parse_rule(args.rule)
    prior = _prior(args.instance)
    out = {"axiom": args.axiom, "rule": str(rule)}
    if args.axiom == "isu":
        _need(args, "signal")
        witness = search_isu_violation(prior, args.signal, rule, budget=args.budget, seed=args.seed)
        out.update(signal=args.signal, seed=args.seed, budget=args.budget, satisfied=witness is None)
        if witness is not None:
            out["witness"] = {"f": witness.f.payoff, "g": witness.g.payoff, "cell": witness.cell,
                              "v_f": witness.v_f, "v_g": witness.v_g,
                              "v_f_post": witness.v_f_post, "v_g_post": witness.v_g_post}
    elif args.axiom == "iis":
        _need(args, "signal", "other")
        out.update(signal=args.signal, satisfied=check_iis(prior, _prior(args.other), args.signal, rule))
    elif args.axiom == "rc":
        _need(args, "signal", "other", "states")
        s, s2 = args.states
        out.update(signal=args.signal, states=[s, s2],
                   satisfied=check_rc_pair(prior, _prior(args.other), args.signal, s, s2, rule))
    else:
        _need(args, "act")
        out["satisfied"] = check_not_all_news_bad(prior, _read_matrix(args.act), rule)
    return out, out["satisfied"]


def cmd_rationalize(args):
    _, profile, _ = load_instance(args.profile, expect=("profile",))
    verdict = is_rationalizable(profile)
    out = {"rationalizable": verdict.rationalizable, "sums": verdict.sums}
    if verdict:
        out["interpretations"] = decomposition_body(construct_interpretations(profile))
    return out, verdict.rationalizable


def cmd_product(args):
    _, PS, _ = load_instance(args.instance, expect=("product",))
    theta, theta2 = args.signals
    joint = joint_update(PS, theta, theta2).belief
    forward = sequential_update(PS, theta, theta2).belief
    backward = sequential_update(PS, theta, theta2, first_signal_first=False).belief
    same = joint == forward == backward
    return {"signals": [theta, theta2], "joint": joint, "sequential": forward,
            "sequential_reversed": backward, "equal": same}, same


def cmd_learn(args):
    state = {"s1": 0, "s2": 1}[args.state]
    M = AccuracyModel(args.H, args.L, args.alpha, args.lam, state)
    seeds = list(range(args.seed, args.seed + args.seeds))
    paths, summary = run_learning(M, args.horizon, seeds, threshold=args.threshold)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["seed", "step", "signal", "net", "belief_s1"])
            for path in paths:
                beliefs = path.beliefs()
                writer.writerow([path.seed, 0, "", 0, format(beliefs[0], ".12g")])
                for k in range(path.horizon):
                    writer.writerow([path.seed, k + 1, f"theta{path.signals[k] + 1}",
                                     int(path.net[k + 1]), format(beliefs[k + 1], ".12g")])
    out = {
        "model": {"H": M.H, "L": M.L, "alpha": M.alpha, "lambda": M.lambda_true, "true_state": args.state},
        "likelihood_ratio": M.likelihood_ratio,
        "perceived_accuracy": M.perceived_accuracy,
        "generator": "numpy Philox", "seeds": seeds, "horizon": args.horizon,
        "threshold": args.threshold,
        "learned": summary.learned, "mislearned": summary.mislearned, "undecided": summary.undecided,
        "terminal_on_true_state": [float(x) for x in summary.terminal_on_true],
    }
    if args.csv:
        out["csv"] = args.csv
    return out, summary.learned == len(seeds)


def cmd_design(args):
    _, I, _ = load_instance(args.instance, expect=("persuasion",))
    targets = None
    if args.targets:
        targets = json.loads(Path(args.targets).read_text())
    r = fraction_vector(args.r) if args.r else None
    cert = construct_epsilon(I, to_fraction(args.epsilon), targets=targets, r=r, N=args.N)
    G = cert.structure
    att = attainable_actions(I)
    return {
        "epsilon": to_fraction(args.epsilon),
        "attainable": list(att.attainable),
        "targets": cert.targets,
        "actions": cert.actions_at_signal,
        "r": G.r, "lambda": G.lam, "N": G.N,
        "signals": G.m * G.N, "systems": G.m * G.N,
        "kernels": G.describe(),
        "posteriors": cert.posteriors,
        "payoff_per_system": cert.payoff_per_system,
        "level": cert.level, "v_star": cert.v_star, "ideal": cert.ideal,
        "own_signal_unique_max": G.own_is_unique_max(),
    }, True


def cmd_examples(args):
    ids = EXAMPLE_IDS if args.all else (args.id,)
    reports = []
    for example in ids:
        report = run_example(example)
        reports.append({
            "example": report.example, "provenance": report.provenance, "ok": report.ok,
            "checks": [{"name": c.name, "ok": c.ok, "expected": c.expected, "actual": c.actual}
                       for c in report.checks],
        })
    ok = all(r["ok"] for r in reports)
    return {"examples": reports, "ok": ok}, ok


def _pretty(value, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                       (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{value}")
    return lines


def _flat(value):
    if isinstance(value, dict):
        return ", ".join(f"{k}={_flat(v)}" for k, v in value.items())
    if isinstance(value, list):
        return "(" + ", ".join(_flat(v) for v in value) + ")"
    return str(value)


def _common_flags(default):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=default,
                        help="human-readable output instead of JSON")
    common.add_argument("--float", action="store_true", default=default, help="render numbers as decimals")
    common.add_argument("--strict", action="store_true", default=default, help="exit 3 on negative verdicts")
    return common


def build_parser():
    parser = _Parser(prog="ambigine", description=__doc__.splitlines()[0],
                     parents=[_common_flags(False)])
    # the flags may also follow the subcommand; SUPPRESS keeps earlier values
    common = _common_flags(argparse.SUPPRESS)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("update", parents=[common], help="posterior set under an updating rule")
    p.add_argument("--rule", required=True, help="cml, fb, ml, proxy, blend or power:<lambda>")
    p.add_argument("--instance", required=True)
    p.add_argument("--signal", required=True)
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("eval", parents=[common], help="ex-ante (and ex-post) value of an act")
    p.add_argument("--instance", required=True)
    p.add_argument("--act", required=True, help="JSON matrix states x signals, inline or a file")
    p.add_argument("--rule", default="cml")
    p.add_argument("--signal")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("axioms", parents=[common], help="check an updating axiom")
    axioms_sub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = axioms_sub.add_parser("check", parents=[common])
    c.add_argument("--rule", required=True)
    c.add_argument("--axiom", required=True, choices=("isu", "iis", "rc", "nanbn"))
    c.add_argument("--instance", required=True)
    c.add_argument("--other", help="second instance for iis and rc")
    c.add_argument("--signal")
    c.add_argument("--states", nargs=2, metavar=("S", "S2"), help="state pair for rc")
    c.add_argument("--act", help="act for nanbn")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--budget", type=int, default=500)
    c.set_defaults(func=cmd_axioms)

    p = sub.add_parser("rationalize", parents=[common], help="CML rationalizability of a belief profile")
    p.add_argument("--profile", required=True)
    p.set_defaults(func=cmd_rationalize)

    p = sub.add_parser("product", parents=[common], help="joint versus sequential updating")
    p.add_argument("--instance", required=True)
    p.add_argument("--signals", nargs=2, required=True, metavar=("THETA", "THETA2"))
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("learn", parents=[common], help="simulate learning from ambiguous-accuracy signals")
    p.add_argument("--H", required=True, type=to_fraction)
    p.add_argument("--L", required=True, type=to_fraction)
    p.add_argument("--lambda", dest="lam", required=True, type=to_fraction)
    p.add_argument("--alpha", type=to_fraction, default=to_fraction("1/2"))
    p.add_argument("--state", choices=("s1", "s2"), default="s1")
    p.add_argument("--horizon", type=int, default=10_000)
    p.add_argument("--seeds", type=int, default=1, help="number of seeds")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--threshold", type=float, default=0.99)
    p.add_argument("--csv", help="write the belief paths to this CSV file")
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("design", parents=[common], help="epsilon-optimal ambiguous information design")
    p.add_argument("--instance", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--targets", help="JSON file mapping each state to a target belief")
    p.add_argument("--r", nargs="+", help="explicit r per state (skips the payoff solve)")
    p.add_argument("--N", type=int, help="explicit number of signals per block")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("examples", parents=[common], help="recompute the shipped worked examples")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--id", choices=EXAMPLE_IDS)
    g.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_examples)
    return parser


def run(argv=None, stdout=None):
    """Parse ``argv``, run the subcommand and return the exit status."""
    stdout = stdout or sys.stdout
    logging.basicConfig(level=os.environ.get("AMBIGINE_LOG_LEVEL", "WARNING").upper())
    args = build_parser().parse_args(argv)
    try:
        body, positive = args.func(args)
    except UsageError as exc:
        print(f"ambigine: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AmbigineError, ValueError, TypeError, KeyError, OSError, ZeroDivisionError) as exc:
        log.debug("validation failure", exc_info=True)
        print(f"ambigine: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    payload = {"schema": SCHEMA, "kind": f"result/{args.command}", "body": body}
    rendered = to_jsonable(payload, as_float=args.float)
    if args.pretty:
        print("\n".join(_pretty(rendered["body"])), file=stdout)
    else:
        print(json.dumps(rendered, indent=2), file=stdout)
    if args.strict and not positive:
        return EXIT_NEGATIVE
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
