"""Tests for the exact integer-polynomial / rational-function layer."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthograph.symnum import (
    IntPolyN,
    PoleError,
    RatFuncN,
    double_factorial,
    fall1,
    fall2,
    format_poly,
    format_ratfunc,
    poly_gcd,
    rise1,
    rise2,
)

N = RatFuncN(IntPolyN([0, 1]))

small_ints = st.integers(min_value=-40, max_value=40)
polys = st.lists(small_ints, min_size=0, max_size=5).map(IntPolyN)
ratfuncs = st.tuples(polys, polys).filter(lambda t: not t[1].is_zero()).map(
    lambda t: RatFuncN(t[0], t[1])
)


class TestIntPolyN:
    def test_trim_and_degree(self):
        assert IntPolyN([1, 2, 0, 0]).degree == 1
        assert IntPolyN([]).is_zero()
        assert IntPolyN([0]).is_zero()
        assert IntPolyN([0, 0, 3]).degree == 2

    def test_arithmetic(self):
        p = IntPolyN([1, 1])
        q = IntPolyN([-1, 1])
        assert p * q == IntPolyN([-1, 0, 1])
        assert p + q == IntPolyN([0, 2])
        assert p - p == IntPolyN([])
        assert p**3 == IntPolyN([1, 3, 3, 1])

    def test_eval(self):
        p = IntPolyN([2, 0, 1])
        assert p.eval_at(3) == 11
        assert p.eval_at(Fraction(1, 2)) == Fraction(9, 4)

    def test_divexact(self):
        p = IntPolyN([-1, 0, 1])
        assert p.divexact(IntPolyN([1, 1])) == IntPolyN([-1, 1])
        with pytest.raises(ValueError):
            IntPolyN([1, 1]).divexact(IntPolyN([0, 1]))

    def test_gcd(self):
        a = IntPolyN([1, 1]) * IntPolyN([2, 1])
        b = IntPolyN([1, 1]) * IntPolyN([3, 1])
        g = poly_gcd(a, b)
        assert g.primitive() == IntPolyN([1, 1])

    @given(polys, polys, polys)
    @settings(max_examples=100, deadline=None)
    def test_distributive(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(polys, polys, st.integers(min_value=-6, max_value=6))
    @settings(max_examples=100, deadline=None)
    def test_mul_matches_eval(self, a, b, n):
        assert (a * b).eval_at(n) == a.eval_at(n) * b.eval_at(n)


class TestRatFuncN:
    def test_reduction(self):
        r = RatFuncN(IntPolyN([-1, 0, 1]), IntPolyN([1, 1]))
        assert r == N - 1

    def test_normalized_sign(self):
        r = RatFuncN(IntPolyN([1]), IntPolyN([0, -1]))
        assert r == -1 / N
        assert r.eval_at(2) == Fraction(-1, 2)

    def test_arith_expressions(self):
        expr = (N - 1) / (N * (N + 2))
        assert expr.eval_at(3) == Fraction(2, 15)
        assert (expr * N * (N + 2)) == N - 1
        assert (1 / N + 1 / N) == 2 / N

    def test_pole(self):
        with pytest.raises(PoleError):
            (1 / (N - 3)).eval_at(3)

    def test_constants(self):
        assert RatFuncN.from_fraction(Fraction(3, 4)).as_fraction() == Fraction(3, 4)
        assert (N / N).is_constant()
        assert not N.is_constant()
        with pytest.raises(ValueError):
            N.as_fraction()

    def test_json_roundtrip(self):
        r = (N**2 - 3) / (2 * N + 4)
        assert RatFuncN.from_json(r.to_json()) == r

    @given(ratfuncs, ratfuncs)
    @settings(max_examples=60, deadline=None)
    def test_field_ops_consistent(self, a, b):
        s = a + b
        for n in (7, 11, 13):
            try:
                lhs = s.eval_at(n)
                rhs = a.eval_at(n) + b.eval_at(n)
            except PoleError:
                continue
            assert lhs == rhs

    @given(ratfuncs)
    @settings(max_examples=60, deadline=None)
    def test_add_neg_is_zero(self, a):
        assert (a + (-a)).is_zero()

    @given(ratfuncs)
    @settings(max_examples=60, deadline=None)
    def test_reciprocal(self, a):
        if a.is_zero():
            return
        assert (a * (1 / a)) == RatFuncN(IntPolyN([1]))


class TestFactorials:
    def test_fall2(self):
        assert fall2(N, 2) == N * (N - 2)
        assert fall2(N, -1) == 1 / N
        assert fall2(N, -2) == 1 / (N * (N - 2))
        assert fall2(N, 0) == RatFuncN(IntPolyN([1]))

    def test_rise2(self):
        assert rise2(N, 2) == N * (N + 2)
        assert rise2(N, -1) == 1 / N
        assert rise2(N, -2) == 1 / (N * (N + 2))

    def test_rise2_expectation_convention(self):
        # per-vertex prefactors used by the spherical formulas
        assert rise2(N, -2).eval_at(5) == Fraction(1, 35)
        assert rise2(N, -1).eval_at(5) == Fraction(1, 5)

    def test_fall1_rise1(self):
        assert fall1(N, 3) == N * (N - 1) * (N - 2)
        assert rise1(N, 3) == N * (N + 1) * (N + 2)
        assert fall1(N, -1) == 1 / N

    def test_double_factorial(self):
        assert [double_factorial(k) for k in (-1, 0, 1, 2, 3, 5, 7)] == [
            1,
            1,
            1,
            2,
            3,
            15,
            105,
        ]


class TestFormatting:
    def test_poly(self):
        assert format_poly(IntPolyN([0, 1])) == "n"
        assert format_poly(IntPolyN([-2, 0, 3])) == "3*n^2 - 2"
        assert format_poly(IntPolyN([])) == "0"

    def test_ratfunc_factored(self):
        val = -8 * (N - 1) * (N - 2) * (N - 4) / (N**8 * (N + 2) ** 4)
        s = format_ratfunc(val)
        assert "(n-1)" in s.replace(" ", "")
        assert "(n+2)^4" in s.replace(" ", "")
        # round-trip sanity at a point
        assert val.eval_at(6) == Fraction(-8 * 5 * 4 * 2, 6**8 * 8**4)

    def test_latex(self):
        s = format_ratfunc(1 / (N * (N + 2)), latex=True)
        assert "\\frac" in s
