from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from whittaker_lab import index as mi
from whittaker_lab.glmod import make_exterior
from whittaker_lab.linalg import rank
from whittaker_lab.poly import Poly
from whittaker_lab.weyl import SingularTypeError
from whittaker_lab.whittaker import (TensorElement, TensorModule, a_act, find_annihilating_m,
                                     free_basis_matrix, omega_op, verify_representation,
                                     w_act, whittaker_decompose, whittaker_vectors)
from whittaker_lab.witt import WittElement, generators


def poly_oracle(a, m, k, p: Poly) -> Poly:
    """t^m (d_k + a_k) p, computed with plain polynomial arithmetic."""
    return Poly.monomial(m) * (p.diff(k) + p.scale(a[k]))


def as_poly(w: TensorElement) -> Poly:
    return Poly(w.n, {r: c for (r, _), c in w.terms.items()})


@pytest.mark.parametrize("a", [(1,), (Fraction(-2, 3),), (1, 2), (0, 3)])
def test_trivial_module_matches_polynomial_oracle(a):
    n = len(a)
    T = TensorModule(a, "trivial")
    for m, k in generators(n, 2):
        for r in mi.up_to_degree(n, 2):
            w = TensorElement.basis_element(T.V, r, 0)
            assert as_poly(T.act_generator((m, k), w)) == poly_oracle(a, m, k, Poly.monomial(r))


def test_natural_module_example():
    T = TensorModule((2,), "natural")
    # t d (1 (x) v) = 2 t (x) v + 1 (x) E_11 v
    got = T.act_generator(((1,), 0), T.whittaker_basis_vector(0))
    assert got == TensorElement(T.V, {((1,), 0): 2, ((0,), 0): 1})
    # t^2 d (t (x) v) = t^2 (1 + 2 t) (x) v + 2 t^2 (x) v
    got = T.act_generator(((2,), 0), TensorElement.basis_element(T.V, (1,), 0))
    assert got == TensorElement(T.V, {((2,), 0): 3, ((3,), 0): 2})


def test_functional_wrappers():
    V = make_exterior(2, 1)
    w = TensorElement.basis_element(V, (0, 0), 1)
    X = WittElement.gen((0, 1), 1)
    assert w_act((1, 1), X, w) == TensorModule((1, 1), V).act(X, w)
    assert a_act(Poly.monomial((1, 0)), w) == TensorElement.basis_element(V, (1, 0), 1)


@pytest.mark.parametrize("a,V,D", [((1,), "natural", 4), ((1, 2), "exterior:1", 3),
                                   ((0, 1), "exterior:2", 2), ((1, -1, 2), "natural", 2)])
def test_representation(a, V, D):
    rep = verify_representation(a, V, D)
    assert rep.passed, rep.counterexample


def test_mutations():
    # dropping the correction term still gives a module (V trivial as L_n-module)
    assert verify_representation((1, 2), "natural", 2, "drop").passed
    for mutation in ("transpose", "unit-weight"):
        rep = verify_representation((1, 2), "natural", 2, mutation)
        assert not rep.passed and rep.counterexample is not None
    with pytest.raises(ValueError):
        TensorModule((1,), "trivial", mutation="bogus")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_whittaker_dimension(n):
    for k in range(n + 1):
        for a in ((1,) * n, (0,) * n):
            assert whittaker_vectors(a, make_exterior(n, k), 3).dim == comb(n, k)


def test_whittaker_vectors_are_constants():
    W = whittaker_vectors((1, 2), "natural", 3)
    T = TensorModule((1, 2), "natural")
    for v in W.basis:
        w = T.from_coords(v, 3)
        assert all(not any(r) for r, _ in w.terms)


def test_decompose_examples():
    # trivial: h (1 (x) 1) = a t, so t = (1/a) h
    assert whittaker_decompose((2,), "trivial", TensorElement.basis_element(
        TensorModule((2,), "trivial").V, (1,), 0)) == {((1,), 0): Fraction(1, 2)}
    # natural: h (1 (x) v) = a t (x) v + 1 (x) v, so t (x) v = (1/a) h - 1/a
    T = TensorModule((3,), "natural")
    got = T.decompose(TensorElement.basis_element(T.V, (1,), 0))
    assert got == {((0,), 0): Fraction(-1, 3), ((1,), 0): Fraction(1, 3)}


def test_k_scalars():
    T = TensorModule((2, 3), "natural")
    assert T.k_scalar((1, 0)) == 2 and T.k_scalar((0, 1)) == 3
    for m in mi.up_to_degree(2, 4):
        expected = 1
        for ai, e in zip((2, 3), m):
            expected *= factorial(e) * ai ** e
        assert T.k_scalar(m) == expected


def test_free_basis_small_cases():
    assert free_basis_matrix((5,), "trivial", 0) == [[1]]
    assert free_basis_matrix((Fraction(1, 2),), "trivial", 1) == [[1, 0], [0, Fraction(1, 2)]]
    for D in range(4):
        M = free_basis_matrix((1, 2), "exterior:1", D)
        assert rank(M) == len(M)


def test_singular_type_fails_freeness():
    T = TensorModule((0, 1), "trivial")
    with pytest.raises(SingularTypeError):
        T.free_basis_matrix(2)
    M = T.free_basis_matrix(2, allow_singular=True)
    assert rank(M) < len(M)
    with pytest.raises(SingularTypeError):
        T.decompose(T.whittaker_basis_vector(0))


def test_singular_whittaker_span_is_full():
    # at a = 0 the A_n-span of the Whittaker vectors is the whole truncation
    T = TensorModule((0, 0), "natural")
    D = 2
    cols = []
    for m in mi.up_to_degree(2, D):
        for j in range(T.dim):
            w = T.poly_act(Poly.monomial(m), T.whittaker_basis_vector(j))
            v = [0] * len(T.basis(D))
            for i, c in T.coords(w, D).items():
                v[i] = c
            cols.append(v)
    assert rank(cols) == len(T.basis(D))


modules = [TensorModule(a, V) for a, V in [((1,), "natural"), ((2, Fraction(-1, 2)), "exterior:1"),
                                           ((1, 3), "trivial"), ((1, 1, 2), "exterior:2")]]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, len(modules) - 1), st.integers(0, 10 ** 6))
def test_round_trip(which, seed):
    T = modules[which]
    rng = random.Random(seed)
    terms = {k: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for k in T.basis(2) if rng.random() < 0.4}
    w = TensorElement(T.V, terms)
    assert T.reassemble(T.decompose(w)) == w


def test_omega_hand_identity():
    # trivial V, n = 1: omega is sum_i (-1)^i C(m,i) [t^(s) (d+a)^2 + (beta+i) t^(s-1) (d+a)]
    # with s = alpha + beta + m, which vanishes exactly when sum (-1)^i C(m,i) i^d = 0 for d <= 1
    def alt(m, d):
        return sum((-1) ** i * comb(m, i) * i ** d for i in range(m + 1))

    assert [alt(m, 0) == 0 and alt(m, 1) == 0 for m in range(4)] == [False, False, True, True]
    for m in range(4):
        M = omega_op((1,), "trivial", (1,), (0,), m, 0, 0, 0, 2)
        assert (not any(x for row in M for x in row)) == (m >= 2)


@pytest.mark.parametrize("a,V", [((1,), "trivial"), ((1, 2), "natural")])
def test_annihilating_m(a, V):
    res = find_annihilating_m(a, V, 1)
    assert res.m == 2 and res.monotone
    assert res.to_json()["vanishing"] == {"0": False, "1": False, "2": True, "3": True}


def test_printing():
    T = TensorModule((1, 1), "natural")
    w = TensorElement(T.V, {((1, 0), 1): 2, ((0, 0), 0): -1})
    assert str(w) == "-v1 + 2*t1*v2"
