import json
from fractions import Fraction as F

import pytest

from rlogconvex import catalog
from rlogconvex.errors import LeadingCoefficientVanishes, NotWithinWindow, ParseError
from rlogconvex.exact import Poly
from rlogconvex.oracles import binary_matrices, motzkin
from rlogconvex.recurrence import (L_operator, SequenceValues, evaluate_terms,
                                   first_r_log_convex_index, load_recurrence_file,
                                   parse_recurrence, parse_recurrence_json, plug_back, violations)

MOTZKIN = "(n+4)*a(n+2) - (2*n+5)*a(n+1) - (3*n+3)*a(n) = 0"


def test_parse_motzkin():
    rec = parse_recurrence(MOTZKIN)
    assert rec.d == 2
    assert rec.p == (Poly([-3, -3]), Poly([-5, -2]), Poly([4, 1]))


def test_parse_constant_and_clearing():
    rec = parse_recurrence("a(n+1) - a(n) = 0")
    assert rec.d == 1 and rec.p == (Poly([-1]), Poly([1]))
    rec = parse_recurrence("a(n+2)/(n+1) - a(n)")
    assert rec.p == (Poly([-1, -1]), Poly(), Poly([1]))


def test_parse_reindexes_to_lowest_term():
    # the published form of the Motzkin recurrence, indices shifted by 2
    rec = parse_recurrence("(n+2)*M(n) = (2*n+1)*M(n-1) + (3*n-3)*M(n-2)")
    assert rec.p == parse_recurrence(MOTZKIN).p


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse_recurrence("(n+1)*a(n+1) - * a(n)")
    assert exc.value.position is not None
    with pytest.raises(ParseError):
        parse_recurrence("a(2*n) - a(n)")
    with pytest.raises(ParseError):
        parse_recurrence("n^2 + 1")


def test_parse_json_form():
    data = {"order": 2, "coefficients": ["-(3*n+3)", "-(2*n+5)", "n+4"],
            "initial": {"0": "1", "1": "1"}, "valid_from": 0}
    rec, inits = parse_recurrence_json(json.dumps(data))
    assert rec.p == parse_recurrence(MOTZKIN).p
    assert inits.values == (1, 1)
    with pytest.raises(ParseError):
        parse_recurrence_json("{not json")


def test_load_text_file(tmp_path):
    path = tmp_path / "m.rec"
    path.write_text(f"# Motzkin\n{MOTZKIN}\na(0) = 1\na(1) = 1\n")
    rec, inits = load_recurrence_file(path)
    assert evaluate_terms(rec, inits, 5).values == (1, 1, 2, 4, 9, 21)


def test_evaluate_examples():
    rec = parse_recurrence(MOTZKIN)
    vals = evaluate_terms(rec, SequenceValues(0, [1, 1]), 5)
    assert vals.values == (1, 1, 2, 4, 9, 21)
    const = parse_recurrence("a(n+1) - a(n) = 0")
    assert set(evaluate_terms(const, SequenceValues(0, [7]), 20).values) == {7}


def test_evaluate_h3_from_oracle_initials():
    e = catalog.get("h3")
    inits = SequenceValues(3, [binary_matrices(n) for n in range(3, 7)])
    vals = evaluate_terms(e.recurrence, inits, 50)
    assert vals[6] == 297200
    assert all(vals[n] == binary_matrices(n) for n in range(7, 16))
    assert plug_back(e.recurrence, vals)


def test_leading_coefficient_vanishes():
    rec = parse_recurrence("(n-3)*a(n+1) - a(n) = 0")
    with pytest.raises(LeadingCoefficientVanishes) as exc:
        evaluate_terms(rec, SequenceValues(0, [1]), 10)
    assert exc.value.n == 3


def test_L_operator():
    assert L_operator(SequenceValues(0, [1, 1, 2])).values == (1,)
    assert set(L_operator(SequenceValues(0, [5] * 6)).values) == {0}
    geo = SequenceValues(0, [3 * F(2, 3) ** k for k in range(8)])
    assert set(L_operator(geo).values) == {0}


def test_first_index_examples():
    e = catalog.get("motzkin")
    vals = e.terms(300)
    assert vals[300] == motzkin(300)
    assert first_r_log_convex_index(vals, 2) == 6
    assert first_r_log_convex_index(vals, 1) == 0
    assert any(level == 2 and n < 6 for level, n, _ in violations(vals, 2))


def test_first_index_h3():
    # the brute-force oracle shows L and L^2 of H_n(3) are nonnegative from n = 3,
    # consistent with (and sharper than) the proven index 8
    vals = catalog.get("h3").terms(100)
    assert first_r_log_convex_index(vals, 2) == 3
    oracle = SequenceValues(0, [binary_matrices(n) for n in range(14)])
    assert first_r_log_convex_index(oracle, 2) == 3


def test_first_index_monotone_in_r():
    vals = catalog.get("fine").terms(200)
    idx = [first_r_log_convex_index(vals, r) for r in (1, 2, 3)]
    assert idx == sorted(idx)


def test_not_within_window():
    v = SequenceValues(0, [1, 2, 3, 4, 5, 6])      # L a_n = -1 everywhere
    with pytest.raises(NotWithinWindow):
        first_r_log_convex_index(v, 1)
    with pytest.raises(ValueError):
        first_r_log_convex_index(SequenceValues(0, [1, 2]), 1)
