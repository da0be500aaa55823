from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from rlogconvex import catalog
from rlogconvex.asymptotics import ratio_expansion, ratio_to_s
from rlogconvex.convexity import (Direction, asymptotic_r, lemma_identity, lemma_transform,
                                  r_from_exponents, s_tower)
from rlogconvex.errors import InsufficientTruncation, ZeroDeviation
from rlogconvex.puiseux import PuiseuxSeries
from rlogconvex.recurrence import L_tower, parse_recurrence


def S(coeffs, K, rho=1):
    return PuiseuxSeries(rho, coeffs, K)


def test_lemma_transform_examples():
    t = lemma_transform(S({0: 1, 1: 1}, 6))
    assert t.coeff(0) == 1 and t.coeff(1) == 2
    t = lemma_transform(S({0: 1, 2: F(3, 2)}, 8))
    assert t.coeff(1) == 0 and t.coeff(2) == 5
    t = lemma_transform(S({0: 1, 3: 1}, 9))
    assert t.coeff(1) == 0 and t.coeff(2) == 3


def test_lemma_transform_truncation_loss():
    # output truncation drops by the deviation index
    t = lemma_transform(S({0: 1, 2: F(3, 2)}, 8))
    assert t.K == 8 - 2


def test_zero_deviation():
    with pytest.raises(ZeroDeviation):
        lemma_transform(S({0: 1}, 5))


@pytest.mark.parametrize("alpha, beta, r", [(F(3, 2), 3, 2), (2, 6, 3), (3, 7, 3), (1, 5, 5), (2, 12, 6)])
def test_r_from_exponents(alpha, beta, r):
    assert r_from_exponents(F(alpha), F(beta)) == r


def test_asymptotic_r_reports():
    rep = asymptotic_r(S({0: 1, 3: F(1, 2)}, 6, rho=2))      # alpha = 3/2, beta = 3
    assert (rep.alpha, rep.c, rep.beta, rep.r_asymptotic) == (F(3, 2), F(1, 2), 3, 2)
    rep = asymptotic_r(S({0: 1, 2: F(3, 2)}, 6))
    assert rep.r_asymptotic == 3 and rep.direction is Direction.LOG_CONVEX
    rep = asymptotic_r(S({0: 1, 1: -1}, 4))
    assert rep.direction is Direction.LOG_CONCAVE and rep.r_asymptotic == 0
    with pytest.raises(InsufficientTruncation):
        asymptotic_r(S({0: 1}, 4))


def test_asymptotic_r_monotone_in_beta():
    rs = [asymptotic_r(S({0: 1, 2: F(3, 2)}, K)).r_asymptotic for K in range(2, 20)]
    assert rs == sorted(rs)


def test_s_tower_h3():
    s = ratio_to_s(ratio_expansion(catalog.get("h3").recurrence, K=8))
    s1, s2 = s_tower(s, 2)
    assert [s1.coeff(k) for k in range(4)] == [1, 3, 1, F(-41, 9)]
    assert [s2.coeff(k) for k in range(3)] == [1, 6, 6]


def test_s_tower_motzkin():
    s = ratio_to_s(ratio_expansion(catalog.get("motzkin").recurrence, K=8))
    s1, s2 = s_tower(s, 2)
    assert s1.coeff(2) == F(3, 2) and s2.coeff(1) == 0 and s2.coeff(2) == 5


def test_s_tower_geometric():
    s = ratio_to_s(ratio_expansion(parse_recurrence("a(n+1) - 3*a(n)"), K=6))
    with pytest.raises(ZeroDeviation) as exc:
        s_tower(s, 2)
    assert exc.value.level == 1


def test_s_tower_needs_truncation():
    s = ratio_to_s(ratio_expansion(catalog.get("motzkin").recurrence, K=4))
    with pytest.raises(InsufficientTruncation):
        s_tower(s, 4)


pos = st.fractions(min_value=F(1, 50), max_value=50, max_denominator=50)


@settings(max_examples=300, deadline=None)
@given(st.tuples(pos, pos, pos, pos, pos))
def test_lemma_identity(a):
    L = [a[k] * a[k + 2] - a[k + 1] ** 2 for k in range(3)]
    assume(all(x != 0 for x in L))
    direct, via_s = lemma_identity(a)
    assert direct == via_s


@pytest.mark.parametrize("name", ["motzkin", "h3"])
def test_lemma_transform_matches_exact_terms(name):
    e = catalog.get(name)
    s = ratio_to_s(ratio_expansion(e.recurrence, K=8))
    s2 = lemma_transform(s)
    vals = e.terms(130)
    L1 = L_tower(vals, 1)[0]
    series = s2.truncate(min(s2.K, 4))
    devs = []
    for n in (30, 60, 120):
        exact = L1[n] * L1[n + 2] / L1[n + 1] ** 2
        devs.append(abs(exact - series.evaluate_exact(n)) * n ** series.K)
    assert devs[1] < devs[0] and devs[2] < devs[1]


@pytest.mark.parametrize("name", catalog.NAMES)
def test_positive_c_means_s_above_one(name):
    e = catalog.get(name)
    rep = asymptotic_r(ratio_to_s(ratio_expansion(e.recurrence, K=6)))
    assert rep.direction is Direction.LOG_CONVEX
    vals = e.terms(502)
    tail = [vals[n] * vals[n + 2] / vals[n + 1] ** 2 for n in range(100, 500)]
    assert all(x >= 1 for x in tail)
