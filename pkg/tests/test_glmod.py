from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from whittaker_lab.glmod import (GlModule, GlRelationError, check_gl_relations, ln_act,
                                 make_exterior, module_from_spec, module_to_spec, natural, trivial)
from whittaker_lab.witt import WittElement


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_exterior_powers_satisfy_relations(n):
    for k in range(n + 1):
        V = make_exterior(n, k)
        assert V.dim == comb(n, k)
        assert check_gl_relations(V) == (True, None)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_identity_acts_by_k(n):
    for k in range(n + 1):
        V = make_exterior(n, k)
        for b in range(V.dim):
            v = [Fraction(int(i == b)) for i in range(V.dim)]
            total = [sum(x) for x in zip(*(V.apply(i, i, v) for i in range(n)))]
            assert total == [k * x for x in v]
        trace = sum(V.E[(i, i)][r][r] for i in range(n) for r in range(V.dim))
        assert trace == k * comb(n, k)


def test_natural_module_matrix_units():
    V = natural(3)
    assert V.apply(0, 2, [0, 0, 1]) == [1, 0, 0]
    assert V.apply(0, 2, [1, 0, 0]) == [0, 0, 0]


def test_exterior_sign():
    V = make_exterior(3, 2)
    # basis e1^e2, e1^e3, e2^e3; E_21 e1^e3 = e2^e3, E_31 e1^e2 = e3^e2 = -e2^e3
    assert V.labels == ["e1^e2", "e1^e3", "e2^e3"]
    assert V.apply(1, 0, [0, 1, 0]) == [0, 0, 1]
    assert V.apply(2, 0, [1, 0, 0]) == [0, 0, -1]


def test_perturbed_module_is_rejected():
    V = natural(2)
    E = {ij: [row[:] for row in M] for ij, M in V.E.items()}
    E[(0, 1)][0][1] = Fraction(2)
    with pytest.raises(GlRelationError) as err:
        GlModule(2, 2, E)
    assert len(err.value.witness) == 4


def test_custom_spec_round_trip():
    spec = module_to_spec(natural(2))
    assert spec == {"type": "exterior", "k": 1}
    custom = {"type": "custom", "dim": 2,
              "E": {"1,1": [[1, 0], [0, 0]], "1,2": [[0, 1], [0, 0]],
                    "2,1": [[0, 0], [1, 0]], "2,2": [[0, 0], [0, 1]]}}
    V = module_from_spec(2, custom)
    assert V.E == natural(2).E
    assert module_from_spec(2, module_to_spec(V)).E == V.E
    with pytest.raises(ValueError):
        module_from_spec(2, {"type": "custom", "dim": 1, "E": {"3,1": [[1]]}})
    with pytest.raises(ValueError):
        module_from_spec(2, "spin")
    assert module_from_spec(3, "exterior:2").dim == 3
    assert trivial(2).dim == 1


def test_ln_act_through_jet():
    V = natural(2)
    # t^m d_k has jet sum_i m_i E_ik, so t2 d1 acts as E_21
    X = WittElement.gen((0, 1), 0)
    assert ln_act(V, X, [1, 0]) == [0, 1]
    assert ln_act(V, X, [0, 1]) == [0, 0]
    # m^2 Delta acts by zero
    assert ln_act(V, WittElement.gen((1, 1), 0), [1, 1]) == [0, 0]
    with pytest.raises(ValueError):
        ln_act(V, X, [1])


def test_ln_act_is_a_representation():
    from whittaker_lab.witt import generators
    V = make_exterior(3, 2)
    jet = [WittElement.gen(*g) for g in generators(3, 2, min_deg=1)]
    v = [Fraction(1), Fraction(-2), Fraction(3)]
    for X in jet:
        for Y in jet:
            lhs = ln_act(V, X.bracket(Y), v)
            rhs = [p - q for p, q in zip(ln_act(V, X, ln_act(V, Y, v)), ln_act(V, Y, ln_act(V, X, v)))]
            assert lhs == rhs
