from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from whittaker_lab.poly import Poly
from whittaker_lab.weyl import (SingularTypeError, WeylElement, WhittakerType, act_twisted,
                                reduce_to_constant, require_nonsingular, shifted_partial,
                                sigma_twist, weyl_mul)


def swap_normal_form(n: int, word: list[tuple[str, int]]) -> dict:
    """Independent oracle: rewrite letters with d_i t_i -> t_i d_i + 1 one swap at a time."""
    todo = {tuple(word): 1}
    done: dict = {}
    while todo:
        w, c = todo.popitem()
        pos = next((k for k in range(len(w) - 1) if w[k][0] == "d" and w[k + 1][0] == "t"), None)
        if pos is None:
            m = [0] * n
            r = [0] * n
            for kind, i in w:
                (m if kind == "t" else r)[i] += 1
            key = (tuple(m), tuple(r))
            done[key] = done.get(key, 0) + c
            continue
        (_, i), (_, j) = w[pos], w[pos + 1]
        swapped = w[:pos] + (w[pos + 1], w[pos]) + w[pos + 2:]
        todo[swapped] = todo.get(swapped, 0) + c
        if i == j:
            short = w[:pos] + w[pos + 2:]
            todo[short] = todo.get(short, 0) + c
    return {k: v for k, v in done.items() if v}


def letters(m, r):
    return [("t", i) for i, e in enumerate(m) for _ in range(e)] + \
           [("d", i) for i, e in enumerate(r) for _ in range(e)]


def test_defining_relation_examples():
    d1, t1 = WeylElement.d(1, 0), WeylElement.t(1, 0)
    assert d1 * t1 == WeylElement(1, {((1,), (1,)): 1, ((0,), (0,)): 1})
    assert d1 * (t1 * t1) == WeylElement(1, {((2,), (1,)): 1, ((1,), (0,)): 2})
    h = t1 * d1
    assert weyl_mul(h, h) == WeylElement(1, {((2,), (2,)): 1, ((1,), (1,)): 1})


def test_examples_by_applying_to_monomials():
    # oracle: both sides agree as operators on t^k, k <= 4
    d1, t1 = WeylElement.d(1, 0), WeylElement.t(1, 0)
    lhs = d1 * (t1 * t1)
    for k in range(5):
        f = Poly.monomial((k,))
        assert lhs.act(f) == d1.act(t1.act(t1.act(f)))


mono = st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                 st.tuples(st.integers(0, 2), st.integers(0, 2)))


@settings(max_examples=60, deadline=None)
@given(mono, mono)
def test_product_matches_single_swap_rewriting(x, y):
    X = WeylElement.monomial(*x)
    Y = WeylElement.monomial(*y)
    oracle = swap_normal_form(2, letters(*x) + letters(*y))
    assert (X * Y).terms == {k: Fraction(v) for k, v in oracle.items()}


elements = st.dictionaries(mono, st.integers(-3, 3), max_size=3).map(lambda d: WeylElement(2, d))


@settings(max_examples=40, deadline=None)
@given(elements, elements, elements)
def test_associativity_and_action(X, Y, Z):
    assert (X * Y) * Z == X * (Y * Z)
    f = Poly(2, {(2, 1): 1, (0, 3): -2, (1, 0): 1})
    assert (X * Y).act(f) == X.act(Y.act(f))


@settings(max_examples=40, deadline=None)
@given(elements, elements)
def test_twist_is_automorphism(X, Y):
    a = WhittakerType((Fraction(1, 2), Fraction(-3)))
    assert sigma_twist(a, X * Y) == sigma_twist(a, X) * sigma_twist(a, Y)
    assert sigma_twist(-a, sigma_twist(a, X)) == X


def test_twist_examples():
    a = WhittakerType.parse("2,3")
    assert sigma_twist(a, WeylElement.d(2, 0)) == WeylElement.d(2, 0) + WeylElement.scalar(2, 2)
    assert sigma_twist(a, WeylElement.t(2, 1)) == WeylElement.t(2, 1)
    h = WeylElement.t(2, 0) * WeylElement.d(2, 0)
    assert sigma_twist(a, h) == h + WeylElement.t(2, 0).scale(2)


def test_act_twisted_examples():
    a = WhittakerType.parse("2,3")
    m = (3, 2)
    assert act_twisted(a, shifted_partial(a, 0), Poly.monomial(m)) == Poly(2, {(2, 2): 3})
    assert act_twisted(a, WeylElement.d(2, 0), Poly.constant(2)) == Poly.constant(2, 2)
    h = WeylElement.t(2, 0) * WeylElement.d(2, 0)
    assert act_twisted(a, h, Poly.monomial((1, 0))) == Poly(2, {(1, 0): 1, (2, 0): 2})


def test_reduce_to_constant():
    r = reduce_to_constant((1,), Poly.monomial((2,)))
    assert r.axes == [0, 0] and r.scalar == 2
    r = reduce_to_constant((1,), Poly.constant(1))
    assert r.steps == [] and r.scalar == 1
    r = reduce_to_constant((1, 1), Poly(2, {(1, 1): 1, (0, 1): 1}))
    assert len(r.steps) == 2 and r.scalar != 0


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-3, 3),
                       min_size=1, max_size=4))
def test_reduction_always_reaches_nonzero_constant(terms):
    f = Poly(2, terms)
    if f:
        assert reduce_to_constant((Fraction(1, 3), -2), f).scalar != 0


def test_type_parsing_and_singularity():
    assert WhittakerType.parse("1,1/2").a == (1, Fraction(1, 2))
    with pytest.raises(ValueError, match="a"):
        WhittakerType.parse("1//2")
    with pytest.raises(SingularTypeError):
        require_nonsingular(WhittakerType((1, 0)))


def test_printing():
    X = WeylElement(2, {((2, 0), (1, 0)): 1, ((0, 0), (0, 1)): 3})
    assert str(X) == "3*d2 + t1^2*d1"
