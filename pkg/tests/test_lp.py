from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from ambigine.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, convex_weights, in_hull, prune_to_extremes, same_hull, solve_lp
from ambigine.numbers import render, to_fraction


class TestNumbers:
    @pytest.mark.parametrize("raw, expected", [
        ("3/8", F(3, 8)), (" 2 ", F(2)), (0.1, F(1, 10)), (7, F(7)), ("0.25", F(1, 4)), (F(5, 6), F(5, 6)),
    ])
    def test_to_fraction(self, raw, expected):
        assert to_fraction(raw) == expected

    @pytest.mark.parametrize("bad", [True, float("nan"), float("inf"), None, [1]])
    def test_rejects(self, bad):
        with pytest.raises((TypeError, ValueError)):
            to_fraction(bad)

    def test_render(self):
        assert render(F(8, 17)) == "8/17"
        assert render(F(3)) == "3"
        assert render(F(1, 3), as_float=True) == "0.333333333333"


class TestSolveLp:
    def test_small_optimum(self):
        r = solve_lp([1, 2], A_ub=[[-1, -1]], b_ub=[-3], maximize=False)
        assert r.status == OPTIMAL and r.x == (3, 0) and r.value == 3

    def test_infeasible(self):
        r = solve_lp([0, 0], A_eq=[[1, 1]], b_eq=[1], A_ub=[[1, 1]], b_ub=[F(1, 2)])
        assert r.status == INFEASIBLE and not r.feasible

    def test_unbounded(self):
        assert solve_lp([1, 0], A_ub=[[-1, 1]], b_ub=[0], maximize=True).status == UNBOUNDED

    def test_redundant_equalities(self):
        r = solve_lp([1, 1], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
        assert r.status == OPTIMAL and r.value == 1

    def test_degenerate_cycling_example(self):
        # Beale's example cycles under the textbook pivot rule
        c = [F(-3, 4), 150, F(-1, 50), 6]
        A = [[F(1, 4), -60, F(-1, 25), 9], [F(1, 2), -90, F(-1, 50), 3], [0, 0, 1, 0]]
        r = solve_lp(c, A_ub=A, b_ub=[0, 0, 1])
        assert r.status == OPTIMAL and r.value == F(-1, 20)

    @settings(max_examples=150, deadline=None)
    @given(st.data())
    def test_agrees_with_scipy(self, data):
        n = data.draw(st.integers(1, 4))
        k = data.draw(st.integers(1, 4))
        ints = st.integers(-5, 5)
        c = [data.draw(ints) for _ in range(n)]
        A = [[data.draw(ints) for _ in range(n)] for _ in range(k)]
        b = [data.draw(st.integers(-3, 8)) for _ in range(k)]
        # a box keeps the float reference bounded
        A_box = A + [[int(i == j) for j in range(n)] for i in range(n)]
        b_box = b + [10] * n
        ours = solve_lp(c, A_ub=A_box, b_ub=b_box)
        ref = linprog(c, A_ub=np.array(A_box, float), b_ub=np.array(b_box, float), bounds=[(0, None)] * n,
                      method="highs")
        if ref.status == 2:
            assert ours.status == INFEASIBLE
        else:
            assert ours.status == OPTIMAL
            assert float(ours.value) == pytest.approx(ref.fun, abs=1e-7)
            assert all(sum(a * x for a, x in zip(row, ours.x)) <= rhs for row, rhs in zip(A_box, b_box))


class TestHulls:
    def test_convex_weights_reconstruct_point(self):
        vertices = [(F(1), F(0)), (F(0), F(1)), (F(1, 2), F(1, 2))]
        w = convex_weights((F(1, 4), F(3, 4)), vertices)
        assert sum(w) == 1
        assert tuple(sum(wi * v[d] for wi, v in zip(w, vertices)) for d in range(2)) == (F(1, 4), F(3, 4))

    def test_outside_point(self):
        assert not in_hull((F(1, 3),) * 3, [(F(4, 9), F(4, 9), F(1, 9)), (F(4, 9), F(1, 9), F(4, 9))])

    def test_same_hull_ignores_redundant_generators(self):
        a = [(F(1), F(0)), (F(0), F(1))]
        b = a + [(F(1, 2), F(1, 2))]
        assert same_hull(a, b)
        assert not same_hull(a, [(F(1), F(0))])

    def test_prune(self):
        pts = [(F(1), F(0)), (F(1, 2), F(1, 2)), (F(0), F(1)), (F(1), F(0))]
        assert sorted(prune_to_extremes(pts)) == [(F(0), F(1)), (F(1), F(0))]
