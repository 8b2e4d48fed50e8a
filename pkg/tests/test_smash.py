from __future__ import annotations

import pytest

from whittaker_lab.pbw import U_JET, DnULnElement
from whittaker_lab.poly import Poly
from whittaker_lab.smash import (FieldGen, PolyGen, phi_generator, phi_poly, phi_sabotaged,
                                 phi_truncation_rank, phi_witt, truncation_domain,
                                 verify_phi_homomorphism)
from whittaker_lab.witt import WittElement


def test_phi_examples():
    assert phi_generator(PolyGen((1, 1))) == DnULnElement(2, {(((1, 1), (0, 0)), ()): 1})
    assert phi_generator(FieldGen((0, 0), 1)) == DnULnElement(2, {(((0, 0), (0, 1)), ()): 1})
    # t1^2 d2 -> t1^2 d2 + 2 t1 (x) t1 d2 + 1 (x) t1^2 d2
    got = phi_generator(FieldGen((2, 0), 1))
    assert got == DnULnElement(2, {(((2, 0), (0, 1)), ()): 1,
                                   (((1, 0), (0, 0)), (((1, 0), 1),)): 2,
                                   (((0, 0), (0, 0)), (((2, 0), 1),)): 1})
    assert str(got) == "t1^2*d2 + 2*t1 (x) [t1*d2] + [t1^2*d2]"


def test_phi_linear_extensions():
    f = Poly(1, {(2,): 3, (0,): 1})
    assert phi_poly(f) == DnULnElement(1, {(((2,), (0,)), ()): 3, (((0,), (0,)), ()): 1})
    X = WittElement.gen((1,), 0)
    assert phi_witt(X) == DnULnElement(1, {(((1,), (1,)), ()): 1, (((0,), (0,)), (((1,), 0),)): 1})


def test_euler_field_image():
    # t d -> t d (x) 1 + 1 (x) t d
    e0 = ((1,), 0)
    assert phi_witt(WittElement.gen(*e0)) == DnULnElement(1, {(((1,), (1,)), ()): 1,
                                                              (((0,), (0,)), (e0,)): 1})
    assert U_JET.gen(e0).filtration_degree() == 1


@pytest.mark.parametrize("n,D", [(1, 1), (1, 3), (2, 2), (3, 1)])
def test_homomorphism(n, D):
    rep = verify_phi_homomorphism(n, D)
    assert rep.passed and rep.counterexample is None
    assert set(rep.checks) == {"poly", "smash", "lie"}


def test_sabotaged_binomials_are_caught():
    rep = verify_phi_homomorphism(2, 2, phi_sabotaged)
    assert not rep.passed
    assert rep.counterexample["family"] == "lie"


@pytest.mark.parametrize("n,D", [(1, 0), (1, 3), (2, 2), (3, 2)])
def test_truncation_rank_full(n, D):
    tr = phi_truncation_rank(n, D)
    assert tr.full and tr.cols == len(truncation_domain(n, D))


def test_truncation_domain_size():
    # n = 1: t^r for r <= D, and t^r (t^m d) for r + m <= D
    assert len(truncation_domain(1, 2)) == 3 + 6


def test_bad_arguments():
    with pytest.raises(ValueError):
        verify_phi_homomorphism(0, 1)
    with pytest.raises(ValueError):
        phi_truncation_rank(1, -1)
