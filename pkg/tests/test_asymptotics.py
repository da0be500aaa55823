from fractions import Fraction as F

import pytest

from rlogconvex import catalog
from rlogconvex.asymptotics import (dominant_branch, leading_balance, ratio_expansion,
                                    plug_back_residual, ratio_to_s, validate_expansion)
from rlogconvex.errors import (DegenerateOrder, DominanceAmbiguous, IrrationalOrComplexBranch,
                               UnsupportedInput)
from rlogconvex.recurrence import SequenceValues, parse_recurrence


def rec(name):
    return catalog.get(name).recurrence


def test_leading_balance_examples():
    assert [(b.theta, b.C) for b in leading_balance(rec("motzkin"))] == [(0, 3), (0, -1)]
    assert [(b.theta, b.C) for b in leading_balance(rec("catalan"))] == [(0, 4)]
    dom = dominant_branch(leading_balance(rec("h3")))
    assert (dom.theta, dom.C) == (3, F(3, 4))


def test_irrational_branch_rejected():
    with pytest.raises(IrrationalOrComplexBranch) as exc:
        leading_balance(parse_recurrence("a(n+2) - a(n+1) - a(n)"))
    assert exc.value.factor is not None


def test_dominance_ambiguous():
    with pytest.raises(DominanceAmbiguous):
        dominant_branch(leading_balance(parse_recurrence("a(n+2) - a(n)")))


def test_oscillating_dominant_branch_unsupported():
    with pytest.raises(UnsupportedInput):
        dominant_branch(leading_balance(parse_recurrence("a(n+1) + a(n)")))


def test_multiple_root_is_degenerate():
    r = parse_recurrence("n*a(n+2) - 2*n*a(n+1) + (n-1)*a(n)")
    with pytest.raises(DegenerateOrder):
        ratio_expansion(r, K=3)


def test_ratio_expansion_motzkin():
    x = ratio_expansion(rec("motzkin"), K=2)
    assert x.theta == 0 and x.rho == 1
    assert [x.tail.coeff(k) for k in range(3)] == [3, F(-9, 2), F(207, 16)]


def test_ratio_expansion_h3():
    x = ratio_expansion(rec("h3"), K=3)
    assert x.theta == 3
    full = x.full_series()
    assert [full.coeff(k) for k in range(-3, 1)] == [F(3, 4), F(3, 2), F(25, 12), F(28, 9)]


def test_ratio_expansion_constant():
    x = ratio_expansion(parse_recurrence("a(n+1) - a(n) = 0"), K=4)
    assert x.theta == 0 and x.tail.coeffs == {0: 1}


def test_ratio_to_s_examples():
    s = ratio_to_s(ratio_expansion(rec("motzkin"), K=4))
    assert s.coeff(0) == 1 and s.coeff(1) == 0 and s.coeff(2) == F(3, 2)
    s = ratio_to_s(ratio_expansion(rec("h3"), K=6))
    assert [s.coeff(k) for k in range(4)] == [1, 3, 1, F(-41, 9)]
    geo = ratio_to_s(ratio_expansion(parse_recurrence("a(n+1) - 5*a(n)"), K=4))
    assert geo.coeffs == {0: 1}


@pytest.mark.parametrize("name", catalog.NAMES)
def test_ratio_to_s_constant_term_is_one(name):
    s = ratio_to_s(ratio_expansion(rec(name), K=5))
    assert s.coeff(0) == 1 and all(k >= 0 for k in s.coeffs)


def test_validate_expansion_decreasing():
    e = catalog.get("motzkin")
    x = ratio_expansion(e.recurrence, K=2)
    check = validate_expansion(e.recurrence, e.initial, x, (100, 200))
    devs = dict(check.deviations)
    assert devs[200] / devs[100] < 0.7
    e = catalog.get("h3")
    x = ratio_expansion(e.recurrence, K=6)      # absolute truncation n^-3
    check = validate_expansion(e.recurrence, e.initial, x, (50, 100))
    devs = dict(check.deviations)
    assert devs[100] / devs[50] < 0.7


def test_validate_geometric_exact():
    r = parse_recurrence("a(n+1) - 2*a(n)")
    x = ratio_expansion(r, K=4)
    check = validate_expansion(r, SequenceValues(0, [3]), x, (10, 20))
    assert check.max == 0


def test_motzkin_ratio_tends_to_dominant_root():
    vals = catalog.get("motzkin").terms(2001)
    assert abs(float(vals.ratio(2000)) - 3) < 1e-2


@pytest.mark.parametrize("name", ["motzkin", "h3", "franel3"])
def test_plug_back_residual_vanishes(name):
    r = rec(name)
    x = ratio_expansion(r, K=8)
    res = plug_back_residual(r, x)
    assert res.is_zero()
