import io
import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambigine.cli import EXIT_INVALID, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, run
from ambigine.core import decompose
from ambigine.golden import EXAMPLE_IDS, load_example, run_all
from ambigine.serialization import (
    InstanceError,
    decomposition_body,
    load_document,
    load_instance,
    parse_body,
    prior_set_body,
    to_jsonable,
)

from helpers import random_simple_prior_set


@pytest.fixture
def files(tmp_path):
    """Write every shipped example to ``tmp_path`` and return the paths by id."""
    out = {}
    for example in EXAMPLE_IDS:
        path = tmp_path / f"{example}.json"
        path.write_text(json.dumps(load_example(example)))
        out[example] = str(path)
    return out


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    text = buf.getvalue()
    return code, (json.loads(text) if text.startswith("{") else text)


class TestSerialization:
    def test_envelope_is_required(self):
        with pytest.raises(InstanceError):
            load_document({"kind": "prior_set", "body": {}})
        with pytest.raises(InstanceError):
            load_document('{"schema": "ambigine/v1", "kind": "prior_set"}')
        with pytest.raises(InstanceError):
            load_document("{not json")

    def test_unknown_kind_and_missing_field(self):
        with pytest.raises(InstanceError, match="unknown kind"):
            parse_body("banana", {})
        with pytest.raises(InstanceError, match="missing"):
            parse_body("prior_set", {"states": ["s"]})

    def test_expect(self):
        doc = load_example("2")
        with pytest.raises(InstanceError, match="expected kind"):
            load_instance(doc, expect=("profile",))

    def test_to_jsonable(self):
        value = {"a": (F(1, 3), 2), "b": {F(1, 2)}, "c": True, "d": None}
        assert to_jsonable(value) == {"a": ["1/3", 2], "b": ["1/2"], "c": True, "d": None}
        assert to_jsonable(F(1, 4), as_float=True) == 0.25

    @settings(max_examples=100, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_round_trips(self, rng):
        P = random_simple_prior_set(rng)
        Q = parse_body("prior_set", json.loads(json.dumps(prior_set_body(P))))
        assert [p.mass for p in Q.extremes] == [p.mass for p in P.extremes]
        D = decompose(P)
        assert parse_body("decomposition", json.loads(json.dumps(decomposition_body(D)))) == D


class TestGolden:
    def test_all_examples_reproduce(self):
        reports = run_all()
        assert [r.example for r in reports] == list(EXAMPLE_IDS)
        for report in reports:
            assert report.checks and report.ok, [c for c in report.checks if not c.ok]

    def test_every_example_has_provenance(self):
        assert all(load_example(e)["provenance"] for e in EXAMPLE_IDS)


class TestCommands:
    def test_update(self, files):
        code, out = call("update", "--rule", "cml", "--instance", files["2"], "--signal", "theta")
        assert code == EXIT_OK
        assert out["schema"] == "ambigine/v1" and out["kind"] == "result/update"
        assert out["body"]["posterior"]["belief"] == ["8/17", "9/17"]

    def test_update_float_and_flag_order(self, files):
        code, a = call("--float", "update", "--rule", "cml", "--instance", files["2"], "--signal", "theta")
        code2, b = call("update", "--float", "--rule", "cml", "--instance", files["2"], "--signal", "theta")
        assert code == code2 == EXIT_OK and a == b
        assert a["body"]["posterior"]["belief"][0] == pytest.approx(8 / 17)

    def test_output_is_deterministic(self, files):
        argv = ["update", "--rule", "fb", "--instance", files["2"], "--signal", "theta"]
        first, second = io.StringIO(), io.StringIO()
        run(argv, stdout=first)
        run(argv, stdout=second)
        assert first.getvalue() == second.getvalue()

    def test_proxy_update_reports_masses(self, files):
        code, out = call("update", "--rule", "proxy", "--instance", files["6"], "--signal", "theta")
        assert code == EXIT_OK
        assert out["body"]["posterior"]["belief"] == ["4/7", "3/7"]
        assert out["body"]["posterior"]["mobius"]

    def test_eval(self, files):
        code, out = call("eval", "--instance", files["2"], "--act", "[[3, 6], [2, 0]]",
                         "--rule", "fb", "--signal", "theta")
        assert code == EXIT_OK
        assert out["body"]["ex_ante"] == "9/4" and out["body"]["ex_post"] == "9/4"

    def test_axioms_isu(self, files):
        argv = ["axioms", "check", "--rule", "fb", "--axiom", "isu", "--instance", files["2"], "--signal", "theta"]
        code, out = call(*argv)
        assert code == EXIT_OK and out["body"]["satisfied"] is False and "witness" in out["body"]
        assert call("--strict", *argv)[0] == EXIT_NEGATIVE
        code, out = call("--strict", *argv[:2], "--rule", "cml", *argv[4:])
        assert code == EXIT_OK and out["body"]["satisfied"] is True

    def test_axioms_nanbn(self, files):
        argv = ["axioms", "check", "--axiom", "nanbn", "--instance", files["5"], "--act", "[[1, 0], [0, 1]]"]
        assert call(*argv, "--rule", "proxy")[1]["body"]["satisfied"] is True

    def test_axioms_missing_argument(self, files):
        code, _ = call("axioms", "check", "--rule", "cml", "--axiom", "iis", "--instance", files["2"])
        assert code == EXIT_USAGE

    def test_rationalize(self, files):
        code, out = call("--strict", "rationalize", "--profile", files["3"])
        assert code == EXIT_NEGATIVE
        assert out["body"]["rationalizable"] is False and out["body"]["sums"]["s"] == "2/3"

    def test_learn(self, files, tmp_path):
        csv_path = tmp_path / "paths.csv"
        code, out = call("learn", "--H", "4/5", "--L", "2/5", "--lambda", "7/10", "--horizon", "2000",
                         "--seeds", "3", "--csv", str(csv_path))
        assert code == EXIT_OK
        assert out["body"]["learned"] == 3 and out["body"]["likelihood_ratio"] == "4/3"
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "seed,step,signal,net,belief_s1" and len(lines) == 1 + 3 * 2001

    def test_learn_invalid_model(self):
        assert call("learn", "--H", "1/2", "--L", "1/2", "--lambda", "1/2")[0] == EXIT_INVALID

    def test_design(self, files):
        code, out = call("design", "--instance", files["design"], "--epsilon", "1/20")
        assert code == EXIT_OK
        body = out["body"]
        assert body["own_signal_unique_max"] is True
        assert F(body["ideal"]) - F(1, 20) < F(body["v_star"]) <= F(body["ideal"])

    def test_examples(self):
        code, out = call("examples", "--id", "1")
        assert code == EXIT_OK and out["body"]["ok"] is True
        code, out = call("examples", "--all")
        assert code == EXIT_OK and len(out["body"]["examples"]) == len(EXAMPLE_IDS)

    def test_pretty(self, files):
        code, text = call("--pretty", "update", "--rule", "cml", "--instance", files["2"], "--signal", "theta")
        assert code == EXIT_OK and "belief: (8/17, 9/17)" in text


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["update", "--rule", "cml", "--instance", "missing.json", "--signal", "theta"],
        ["update", "--rule", "bogus", "--instance", "{FILE2}", "--signal", "theta"],
        ["update", "--rule", "cml", "--instance", "{FILE2}", "--signal", "nope"],
        ["rationalize", "--profile", "{FILE2}"],
    ])
    def test_invalid_input(self, files, argv):
        argv = [a.replace("{FILE2}", files["2"]) for a in argv]
        assert call(*argv)[0] == EXIT_INVALID

    @pytest.mark.parametrize("argv", [[], ["frobnicate"], ["update", "--rule", "cml"], ["examples", "--id", "9"]])
    def test_usage(self, argv):
        with pytest.raises(SystemExit) as info:
            run(argv, stdout=io.StringIO())
        assert info.value.code == EXIT_USAGE
