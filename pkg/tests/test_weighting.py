from __future__ import annotations

from fractions import Fraction

import pytest

from whittaker_lab.weighting import (WeightingFunctor, intersection_decay, omega_on_weights,
                                     shift_of, uniform_bound_check, verify_weight_representation,
                                     weight_action, weight_grid)
from whittaker_lab.weyl import SingularTypeError
from whittaker_lab.whittaker import TruncationError


def test_grid_and_shift():
    assert weight_grid(2, 0, 1) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    with pytest.raises(ValueError):
        weight_grid(1, 2, 1)
    assert shift_of(((2, 1), 0)) == (1, 1)
    assert shift_of(((0, 0), 1)) == (0, -1)


@pytest.mark.parametrize("a,expected", [(1, 12), (2, 6), (Fraction(1, 2), 24)])
def test_hand_example_one_variable(a, expected):
    # h 1 = a t and h^2 1 = a t + a^2 t^2, so t^2 d (1) = a t^2 = (h^2 - h)/a;
    # on M^3 it lands in M^4 where h = 4
    assert weight_action((a,), "trivial", 2, (2,), 0, (3,)) == [[expected]]


def test_cartan_acts_by_weight():
    F = WeightingFunctor((1, 2), "natural", 2)
    r = (Fraction(1, 2), -3)
    assert F.action(((1, 0), 0), r) == [[Fraction(1, 2), 0], [0, Fraction(1, 2)]]
    assert F.action(((0, 1), 1), r) == [[-3, 0], [0, -3]]


def test_truncation_guard():
    F = WeightingFunctor((1,), "trivial", 2)
    with pytest.raises(TruncationError):
        F.action(((3,), 0), (0,))
    with pytest.raises(TruncationError):
        verify_weight_representation((1,), "trivial", 2, [(0,)], max_deg=2)
    with pytest.raises(SingularTypeError):
        WeightingFunctor((0, 1), "trivial", 2)


@pytest.mark.parametrize("a,V,D,grid", [((1,), "natural", 5, weight_grid(1, -2, 2)),
                                        ((1, 2), "exterior:1", 3, weight_grid(2, -1, 1)),
                                        ((Fraction(2, 3),), "trivial", 3, [(Fraction(1, 2),)])])
def test_weight_representation(a, V, D, grid):
    rep = verify_weight_representation(a, V, D, grid)
    assert rep.passed and rep.checks["bracket"] > 0


def test_uniform_bound():
    rep = uniform_bound_check((1, 2), "natural", 3, weight_grid(2, -1, 1))
    assert rep.passed and set(rep.dims.values()) == {2}
    assert rep.decay[-1] == 0
    assert all(x >= y for x, y in zip(rep.decay, rep.decay[1:]))


def test_component_dim_matches_free_rank():
    F = WeightingFunctor((1,), "exterior:1", 4)
    for r in weight_grid(1, -3, 3):
        assert F.component_dim(r) == 1


def test_intersection_decay_one_variable():
    # dim T_<=D = D + 1 and each I_r M misses exactly one dimension
    F = WeightingFunctor((1,), "trivial", 2)
    assert intersection_decay(F, 2) == [2, 0, 0]


def test_omega_on_weights():
    grid = weight_grid(1, -1, 1)
    assert omega_on_weights((1,), "trivial", 2, grid, 1).passed
    rep = omega_on_weights((1,), "trivial", 1, grid, 1)
    assert not rep.passed and rep.counterexample is not None


def test_partial_lowers_weight_by_a():
    # d_i (1 (x) v) = a_i (1 (x) v), with no h-dependence
    assert weight_action((3, 2), "natural", 2, (0, 0), 1, (1, 1)) == [[2, 0], [0, 2]]


def test_trivial_module_up_to_degree_three_generators():
    assert verify_weight_representation((1,), "trivial", 5, weight_grid(1, -2, 2)).max_deg == 3
