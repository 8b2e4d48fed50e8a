from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from whittaker_lab.glmod import natural, trivial
from whittaker_lab.poly import Poly
from whittaker_lab.textio import (ParseError, parse_grid, parse_poly, parse_rational,
                                  parse_rationals, parse_tensor, parse_type, parse_weyl,
                                  parse_witt)
from whittaker_lab.weyl import WeylElement
from whittaker_lab.whittaker import TensorElement
from whittaker_lab.witt import WittElement


def test_rationals():
    assert parse_rationals("1,1/2") == (1, Fraction(1, 2))
    assert parse_rational(" -3/4 ") == Fraction(-3, 4)
    assert parse_type("2,-1").a == (2, -1)
    for bad in ("1//2", "0.5", "1/0", "", "1e3"):
        with pytest.raises(ParseError) as err:
            parse_rational(bad, "a[1]")
        assert err.value.field == "a[1]"
    with pytest.raises(ParseError, match=r"a\[2\]: malformed rational '1//2'"):
        parse_rationals("1,1//2", "a")
    with pytest.raises(ParseError):
        parse_rationals("", "a")


def test_grid():
    assert parse_grid("-2:2") == (-2, 2)
    for bad in ("2:1", "1..2", "a:b"):
        with pytest.raises(ParseError):
            parse_grid(bad)


def test_poly_example():
    assert parse_poly("3/2*t1^2*t2 - t3", 3) == Poly(3, {(2, 1, 0): Fraction(3, 2), (0, 0, 1): -1})
    assert parse_poly("2 + t1 - 2", 1) == Poly.monomial((1,))


def test_weyl_and_witt_examples():
    assert parse_witt("t1^2*d1 + 3*d2", 2) == WittElement(2, {((2, 0), 0): 1, ((0, 0), 1): 3})
    assert parse_weyl("t1*d1^2 - 1", 1) == WeylElement(1, {((1,), (2,)): 1, ((0,), (0,)): -1})


def test_tensor_example():
    V = natural(2)
    assert parse_tensor("t1*v1 - 2*v2", V) == TensorElement(V, {((1, 0), 0): 1, ((0, 0), 1): -2})
    assert parse_tensor("t1", trivial(1)) == TensorElement(trivial(1), {((1,), 0): 1})


@pytest.mark.parametrize("text,fragment", [
    ("t1 t2", "missing"),
    ("t1*", "dangling"),
    ("t3", "out of range"),
    ("d1*t1", "before d-factors"),
    ("t1 + x", "unexpected character"),
    ("t1 + + t2", "where a factor"),
])
def test_witt_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_weyl(text, 2, "x")


def test_structure_errors():
    with pytest.raises(ParseError, match="exactly one"):
        parse_witt("t1", 1)
    with pytest.raises(ParseError, match="only t-factors"):
        parse_poly("d1", 1)
    with pytest.raises(ParseError, match="missing v"):
        parse_tensor("t1", natural(2))
    with pytest.raises(ParseError, match="out of range"):
        parse_tensor("v3", natural(2))


exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(exps, exps), coeffs, max_size=4))
def test_printed_weyl_parses_back(terms):
    X = WeylElement(2, terms)
    if X:
        assert parse_weyl(str(X), 2) == X


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(exps, st.integers(0, 1)), coeffs, min_size=1, max_size=4))
def test_printed_witt_and_tensor_parse_back(terms):
    X = WittElement(2, terms)
    assert parse_witt(str(X), 2) == X
    V = natural(2)
    w = TensorElement(V, terms)
    assert parse_tensor(str(w), V) == w
