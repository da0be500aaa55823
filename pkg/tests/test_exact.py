from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings, strategies as st

from rlogconvex.errors import NeverPositive
from rlogconvex.exact import (Poly, RationalFunction, cauchy_bound, format_rational,
                              isolate_real_roots, poly_gcd, positivity_threshold, real_roots_in)

n = Poly([0, 1])


def test_poly_basics():
    p = Poly([6, -5, 1])
    assert p.degree == 2 and p.lc == 1
    assert p(2) == 0 and p(3) == 0
    assert str(p) == "n^2 - 5*n + 6"
    assert p.shift(1) == Poly([2, -3, 1])
    q, r = p.divmod(Poly([-2, 1]))
    assert q == Poly([-3, 1]) and r.is_zero()
    assert poly_gcd(p, Poly([-3, 1]) * Poly([1, 1])) == Poly([-3, 1])


def test_rational_function_normal_form():
    f = RationalFunction(Poly([2, 2]), Poly([-4, 0, 4]))      # (2n+2)/(4n^2-4)
    assert f.num == Poly([1]) and f.den == Poly([-2, 2])
    g = RationalFunction(Poly([1]), Poly([0, -3]))
    assert g.den.lc > 0
    assert (f + g) - g == f
    assert (f * g) / g == f
    assert f.shift(1)(3) == f(4)


def test_format_rational():
    assert format_rational(F(3, 2)) == "3/2"
    assert format_rational(F(-4)) == "-4/1"


@pytest.mark.parametrize("p, lo, hi, open_, expected", [
    (Poly([6, -5, 1]), 0, 10, False, 2),
    (Poly([1, 0, 1]), -10, 10, False, 0),
    (Poly([0, 0, -100, 1]), 0, 200, True, 1),
])
def test_real_roots_in(p, lo, hi, open_, expected):
    assert real_roots_in(p, lo, hi, open=open_) == expected


def test_real_roots_rejects_zero():
    with pytest.raises(ValueError):
        real_roots_in(Poly(), 0, 1)


def test_positivity_threshold_examples():
    assert positivity_threshold(Poly([6, -5, 1])) == 4
    assert positivity_threshold(Poly([0, 0, -100, 1])) == 101
    # 2(21n^2+82n+81)/((3n+5)^2 n): numerator alone is positive from 0,
    # the pole at n = 0 moves the threshold to 1
    assert positivity_threshold(Poly([81, 82, 21])) == 0
    top = RationalFunction(Poly([162, 164, 42]), Poly([25, 30, 9]) * n)
    assert positivity_threshold(top) == 1


def test_positivity_threshold_never_positive():
    with pytest.raises(NeverPositive):
        positivity_threshold(Poly([1, 0, -1]))
    with pytest.raises(NeverPositive):
        positivity_threshold(RationalFunction(Poly()))
    with pytest.raises(NeverPositive):
        positivity_threshold(RationalFunction(Poly([1]), Poly([0, -1])))


def test_positivity_threshold_roots_between_integers():
    # (n - 5/2)(n - 7/3): negative only on (7/3, 5/2), which holds no integer
    p = Poly.from_roots([F(5, 2), F(7, 3)])
    assert positivity_threshold(p) == 0
    # double root at 50: zero there, so threshold 51
    assert positivity_threshold(Poly.from_roots([50, 50])) == 51


def test_cauchy_bound_and_isolation():
    p = Poly.from_roots([F(1, 3), 2, F(17, 2)])
    B = cauchy_bound(p)
    ivs = isolate_real_roots(p, -B, B)
    assert len(ivs) == 3
    for (a, b), root in zip(ivs, [F(1, 3), 2, F(17, 2)]):
        assert a <= root <= b


planted = st.lists(st.fractions(min_value=-20, max_value=60, max_denominator=4), min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(planted)
def test_sturm_count_matches_grid(roots):
    p = Poly.from_roots(roots)
    distinct = {r for r in roots if 0 < r < 50}
    assert real_roots_in(p, 0, 50, open=True) == len(distinct)


@settings(max_examples=60, deadline=None)
@given(planted, st.integers(1, 3))
def test_threshold_is_minimal_and_valid(roots, lead):
    p = Poly.from_roots(roots, lead=lead)
    N = positivity_threshold(p)
    assert all(p(m) > 0 for m in range(N, N + 300))
    assert N == 0 or p(N - 1) <= 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(max_denominator=9, min_value=-9, max_value=9), min_size=1, max_size=5),
       st.lists(st.fractions(max_denominator=9, min_value=-9, max_value=9), min_size=1, max_size=5))
def test_arithmetic_closed_and_exact(a, b):
    pa, pb = Poly(a), Poly(b)
    assert (pa + pb) - pb == pa
    if not pb.is_zero():
        assert (pa * pb).exact_div(pb) == pa
        fa = RationalFunction(pa) if not pa.is_zero() else RationalFunction(1)
        fb = RationalFunction(pb, Poly([1, 1]))
        assert (fa * fb) / fb == fa


def test_random_threshold_against_scan():
    rng = random.Random(7)
    for _ in range(100):
        roots = [F(rng.randint(-30, 300), rng.randint(1, 3)) for _ in range(rng.randint(1, 5))]
        p = Poly.from_roots(roots) * Poly([rng.randint(1, 9), 0, 1])
        N = positivity_threshold(p)
        bad = [m for m in range(0, 400) if p(m) <= 0]
        assert N == (max(bad) + 1 if bad else 0)
