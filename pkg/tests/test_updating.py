from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambigine.core import PosteriorSet, decompose, prior_set
from ambigine.errors import InvalidMobius, NotSimple, NullSignal
from ambigine.lp import in_hull
from ambigine.updating import (
    BLEND,
    CML,
    FB,
    ML,
    PROXY,
    POWER,
    MobiusBelief,
    apply_rule,
    blend_cml_fb_update,
    blend_weight,
    cml_update,
    cml_update_decomposed,
    fb_update,
    ml_update,
    parse_rule,
    power_update,
    proxy_masses,
    proxy_update,
)

from helpers import non_null, random_simple_prior_set


def fractions(row):
    return tuple(F(x) for x in row)


class TestRules:
    @pytest.mark.parametrize("text, rule", [("cml", CML), (" FB ", FB), ("power:1/2", POWER(F(1, 2)))])
    def test_parse(self, text, rule):
        assert parse_rule(text) == rule

    @pytest.mark.parametrize("text", ["power", "power:1", "power:0", "bayes"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            parse_rule(text)

    def test_str_round_trip(self):
        assert parse_rule(str(POWER(F(1, 3)))) == POWER(F(1, 3))


class TestExampleTwo:
    def test_cml(self, example2):
        P, _ = example2
        assert cml_update(P, "theta").belief == (F(8, 17), F(9, 17))

    def test_fb_and_ml(self, example2):
        P, _ = example2
        fb = fb_update(P, "theta")
        assert fb.same_set(PosteriorSet(P.states, ((F(1, 4), F(3, 4)), (F(8, 11), F(3, 11)))))
        assert ml_update(P, "theta").extremes == ((F(1, 4), F(3, 4)),)

    def test_cml_outside_fb_hull_in_example_one(self, example1):
        P, doc = example1
        mu = cml_update(P, doc["signal"]).belief
        assert mu == (F(1, 3),) * 3
        assert not in_hull(mu, fb_update(P, doc["signal"]).extremes)


class TestCml:
    def test_requires_simple(self):
        Q = prior_set(["s", "t"], ["x", "y"], [[[F(1, 2), 0], [F(1, 2), 0]], [[F(1, 4), 0], [F(3, 4), 0]]])
        with pytest.raises(NotSimple):
            cml_update(Q, "x")

    def test_null_signal(self):
        P = prior_set(["s", "t"], ["x", "y"], [[[F(1, 2), 0], [F(1, 2), 0]]])
        with pytest.raises(NullSignal):
            cml_update(P, "y")
        with pytest.raises(NullSignal):
            fb_update(P, "y")

    @settings(max_examples=200, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_decomposed_form_agrees(self, rng):
        P = random_simple_prior_set(rng)
        D = decompose(P)
        for theta in non_null(P):
            assert cml_update(P, theta).belief == cml_update_decomposed(D, theta).belief

    @settings(max_examples=200, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_singleton_prior_is_bayes(self, rng):
        P = random_simple_prior_set(rng, k=1)
        for theta in non_null(P):
            j = P.signals.index(theta)
            assert cml_update(P, theta).belief == P.extremes[0].conditional(j)
            assert fb_update(P, theta).belief == P.extremes[0].conditional(j)


class TestFbMl:
    @settings(max_examples=150, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_ml_is_subset_of_fb(self, rng):
        P = random_simple_prior_set(rng)
        for theta in non_null(P):
            fb = fb_update(P, theta).extremes
            assert all(in_hull(q, fb) for q in ml_update(P, theta).extremes)

    @settings(max_examples=100, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_fb_contains_conditionals_of_mixtures(self, rng):
        P = random_simple_prior_set(rng)
        m, n = P.shape
        w = [F(rng.randint(1, 4)) for _ in P.extremes]
        w = [x / sum(w) for x in w]
        mix = [[sum(wt * p.mass[i][j] for wt, p in zip(w, P.extremes)) for j in range(n)] for i in range(m)]
        for theta in non_null(P):
            j = P.signals.index(theta)
            col = [row[j] for row in mix]
            cond = tuple(x / sum(col) for x in col)
            assert in_hull(cond, fb_update(P, theta).extremes)


class TestHybrids:
    @settings(max_examples=150, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_blend_is_the_stated_mixture(self, rng):
        P = random_simple_prior_set(rng)
        for theta in non_null(P):
            w = blend_weight(P, theta)
            assert 0 < w <= 1
            mu = cml_update(P, theta).belief
            expected = [tuple(w * a + (1 - w) * b for a, b in zip(mu, q)) for q in fb_update(P, theta).extremes]
            assert blend_cml_fb_update(P, theta).same_set(PosteriorSet(P.states, tuple(expected)))

    def test_blend_at_full_weight_is_cml(self):
        # all mass sits at theta, so w = 1
        P = prior_set(["s", "t"], ["x"], [[[F(1, 2)], [F(1, 2)]]])
        assert blend_cml_fb_update(P, "x").belief == cml_update(P, "x").belief

    @settings(max_examples=150, deadline=None)
    @given(st.randoms(use_true_random=False), st.sampled_from([F(1, 4), F(1, 2), F(3, 4)]))
    def test_power_closed_form(self, rng, lam):
        P = random_simple_prior_set(rng)
        D = decompose(P)
        for theta in non_null(P):
            j = P.signals.index(theta)
            w = [float(m) * float(c) ** float(lam) for m, c in zip(D.mu, D.max_likelihood(j))]
            expected = [x / sum(w) for x in w]
            got = power_update(D, theta, lam).belief
            assert all(abs(a - b) <= 1e-12 for a, b in zip(got, expected))

    def test_power_at_one_is_cml(self, example2):
        P, _ = example2
        assert power_update(P, "theta", 1).belief == (F(8, 17), F(9, 17))

    def test_power_moves_toward_prior(self, example2):
        P, _ = example2
        mu = decompose(P).mu
        cml = cml_update(P, "theta").belief
        post = power_update(P, "theta", F(1, 2)).belief
        assert min(mu[0], cml[0]) <= post[0] <= max(mu[0], cml[0])


class TestProxy:
    def test_example_six(self, example6):
        B, _ = example6
        assert proxy_update(B, "theta").belief == (F(4, 7), F(3, 7))

    def test_example_five(self, example5):
        B, _ = example5
        assert proxy_update(B, "theta").belief == (F(1, 2), F(1, 2))

    def test_singleton_masses_are_bayes(self):
        B = MobiusBelief(("s", "t"), ("x", "y"), {
            frozenset({("s", "x")}): F(1, 4), frozenset({("t", "x")}): F(1, 4), frozenset({("t", "y")}): F(1, 2)})
        assert proxy_update(B, "x").belief == (F(1, 2), F(1, 2))
        assert B.to_prior_set().extremes[0].conditional(0) == (F(1, 2), F(1, 2))

    def test_set_valued_posterior(self):
        B = MobiusBelief(("s", "t"), ("x",), {frozenset({("s", "x"), ("t", "x")}): 1})
        Q = proxy_update(B, "x")
        assert proxy_masses(B, "x") == {frozenset({"s", "t"}): 1}
        assert Q.same_set(PosteriorSet(("s", "t"), ((F(1), F(0)), (F(0), F(1)))))

    def test_core_evaluation_matches_choquet(self, example6):
        B, doc = example6
        f = [[F(x) for x in row] for row in doc["acts"]["f"]]
        assert B.evaluate(f) == B.to_prior_set().evaluate(f)

    @pytest.mark.parametrize("masses", [
        {frozenset({("s", "x")}): F(1, 2)},
        {frozenset({("s", "x")}): F(3, 2), frozenset({("t", "x")}): F(-1, 2)},
        {frozenset({("u", "x")}): 1},
    ])
    def test_invalid(self, masses):
        with pytest.raises(InvalidMobius):
            MobiusBelief(("s", "t"), ("x",), masses)

    def test_dispatch_requires_belief(self, example2):
        P, _ = example2
        with pytest.raises(TypeError):
            apply_rule(PROXY, P, "theta")


class TestDispatch:
    @pytest.mark.parametrize("rule", [CML, FB, ML, BLEND, POWER(F(1, 2))])
    def test_all_rules_accept_decompositions(self, example2, rule):
        P, _ = example2
        assert apply_rule(rule, decompose(P), "theta").same_set(apply_rule(rule, P, "theta"))
