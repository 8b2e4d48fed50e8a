"""Weight components M^r = M / I_r M of a Whittaker tensor module.

I_r is the maximal ideal of U(h_n) generated by h_i - r_i.  Since M is free
over U(h_n) on {1 (x) v_j}, the class of h^m (1 (x) v_j) in M^r is
r^m [1 (x) v_j], so every M^r is identified with V.  A generator
X = t^q d_i has weight q - e_i and maps M^r to M^(r + q - e_i); its matrix
comes from decomposing X (1 (x) v_j) in the free basis and evaluating each
h^m' at the target weight.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Sequence

from . import index as mi
from .index import MultiIndex
from .linalg import Matrix, Subspace, identity, matmul, zeros
from .parallel import pmap
from .weyl import require_nonsingular
from .whittaker import TensorElement, TensorModule, TruncationError, matrix_between
from .witt import Generator, WittElement, generator_bracket, generators

Weight = tuple[Fraction, ...]


def as_weight(r: Iterable) -> Weight:
    return tuple(Fraction(x) for x in r)


def weight_grid(n: int, lo: int, hi: int) -> list[Weight]:
    """The integer box {lo..hi}^n, lexicographic."""
    if lo > hi:
        raise ValueError(f"empty grid {lo}:{hi}")
    return [as_weight(r) for r in product(range(lo, hi + 1), repeat=n)]


def shift_of(g: Generator) -> tuple[int, ...]:
    q, i = g
    return tuple(x - (k == i) for k, x in enumerate(q))


def _shifted(r: Weight, s: Sequence[int]) -> Weight:
    return tuple(x + y for x, y in zip(r, s))


def _eval_monomial(r: Weight, m: MultiIndex) -> Fraction:
    out = Fraction(1)
    for x, e in zip(r, m):
        out *= x ** e
    return out


class WeightingFunctor:
    """Weight components of T(A_n^a, V) at truncation D."""

    def __init__(self, a, V, D: int):
        self.module = TensorModule(a, V)
        require_nonsingular(self.module.a)
        self.n = self.module.n
        self.dim = self.module.dim
        self.D = D
        self._images: dict[Generator, dict] = {}

    def image_coefficients(self, g: Generator) -> list[dict]:
        """Free-basis coefficients of X (1 (x) v_j), one dict per j."""
        hit = self._images.get(g)
        if hit is None:
            q, _ = g
            if sum(q) > self.D:
                raise TruncationError(
                    f"generator of degree {sum(q)} needs truncation >= {sum(q)}, got D={self.D}")
            T = self.module
            hit = [T.decompose(T.act_generator(g, T.whittaker_basis_vector(j)))
                   for j in range(self.dim)]
            self._images[g] = hit
        return hit

    def action(self, g: Generator, r) -> Matrix:
        """Matrix of X : M^r -> M^(r + shift(X)) in the bases {[1 (x) v_j]}."""
        target = _shifted(as_weight(r), shift_of(g))
        M = zeros(self.dim, self.dim)
        for j, coeffs in enumerate(self.image_coefficients(g)):
            for (m, jj), c in coeffs.items():
                M[jj][j] += c * _eval_monomial(target, m)
        return M

    def combination(self, terms: dict[Generator, object], r) -> Matrix:
        M = zeros(self.dim, self.dim)
        for g, c in terms.items():
            for row, arow in zip(M, self.action(g, r)):
                for k, x in enumerate(arow):
                    row[k] += c * x
        return M

    def component_dim(self, r, D: int | None = None) -> int:
        """dim of T_<=D modulo (I_r M meets T_<=D), computed without the free basis.

        (h_i - r_i) T_<=(D-1) spans I_r M in degree <= D, so the quotient
        dimension is dim T_<=D minus the rank of those images.
        """
        D = self.D if D is None else D
        return len(self.module.basis(D)) - self.ideal_part(r, D).dim

    def ideal_part(self, r, D: int) -> Subspace:
        T = self.module
        r = as_weight(r)
        size = len(T.basis(D))
        if D == 0:
            return Subspace(size)
        cols: list = []
        for i in range(self.n):
            h = (mi.unit(self.n, i), i)

            def op(w: TensorElement, h=h, ri=r[i]) -> TensorElement:
                return T.act_generator(h, w) - w.scale(ri)

            A = matrix_between(T, T, op, D - 1, D)
            cols.extend(zip(*A))
        return Subspace(size, cols)


def weight_action(a, V, D: int, q: MultiIndex, i: int, r) -> Matrix:
    """Matrix of t^q d_i from M^r to M^(r + q - e_i); ``i`` is 0-based."""
    return WeightingFunctor(a, V, D).action((tuple(q), i), r)


@dataclass
class WeightReport:
    passed: bool
    checks: dict[str, int]
    max_deg: int
    grid_size: int
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": self.checks, "max_deg": self.max_deg,
                "grid_size": self.grid_size, "counterexample": self.counterexample}


def _fmt_gen(g: Generator) -> str:
    return str(WittElement.gen(*g))


def verify_weight_representation(a, V, D: int, grid: Sequence, max_deg: int | None = None
                                 ) -> WeightReport:
    """Bracket compatibility of the weight action and the h_i eigenvalue law.

    Generators t^q d_i with |q| <= max_deg; their brackets have degree up to
    2 max_deg - 1, which must fit the truncation.
    """
    F = WeightingFunctor(a, V, D)
    if max_deg is None:
        max_deg = (D + 1) // 2
    if 2 * max_deg - 1 > D:
        raise TruncationError(f"generators of degree {max_deg} need D >= {2 * max_deg - 1}, got {D}")
    grid = [as_weight(r) for r in grid]
    gens = generators(F.n, max_deg)
    checks = {"eigen": 0, "bracket": 0}

    def fail(**info) -> WeightReport:
        return WeightReport(False, checks, max_deg, len(grid), info)

    for r in grid:
        for i in range(F.n):
            checks["eigen"] += 1
            h = (mi.unit(F.n, i), i)
            expected = [[r[i] * x for x in row] for row in identity(F.dim)]
            if F.action(h, r) != expected:
                return fail(family="eigen", axis=i + 1, weight=[str(x) for x in r])
    for ia, x in enumerate(gens):
        for y in gens[ia + 1:]:
            br = generator_bracket(x, y)
            sx, sy = shift_of(x), shift_of(y)
            for r in grid:
                checks["bracket"] += 1
                lhs = F.combination(br, r)
                rhs = [[u - v for u, v in zip(ru, rv)] for ru, rv in zip(
                    matmul(F.action(x, _shifted(r, sy)), F.action(y, r)),
                    matmul(F.action(y, _shifted(r, sx)), F.action(x, r)))]
                if lhs != rhs:
                    return fail(family="bracket", left=_fmt_gen(x), right=_fmt_gen(y),
                                weight=[str(c) for c in r])
    return WeightReport(True, checks, max_deg, len(grid))


@dataclass
class BoundReport:
    dims: dict[str, int]
    bound: int
    decay: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(d == self.bound for d in self.dims.values())

    def to_json(self) -> dict:
        return {"passed": self.passed, "bound": self.bound, "dims": self.dims,
                "intersection_decay": self.decay}


def _weight_str(r: Weight) -> str:
    return ",".join(str(x) for x in r)


def _component_dim(args) -> int:
    a, V, D, r = args
    return WeightingFunctor(a, V, D).component_dim(r)


def uniform_bound_check(a, V, D: int, grid: Sequence, decay_radius: int | None = None
                        ) -> BoundReport:
    """Every weight component on the grid has dimension dim V.

    Also reports dim of the intersection of I_r M with T_<=D over the boxes
    {-R..R}^n for R = 0..decay_radius; it reaches 0 once 2R + 1 > D.
    """
    F = WeightingFunctor(a, V, D)
    grid = [as_weight(r) for r in grid]
    spec = V if isinstance(V, (str, dict)) else F.module.V
    dims = pmap(_component_dim, [(F.module.a, spec, D, r) for r in grid])
    report = BoundReport({_weight_str(r): d for r, d in zip(grid, dims)}, F.dim)
    if decay_radius is None:
        decay_radius = D // 2 + 1
    report.decay = intersection_decay(F, decay_radius)
    return report


def intersection_decay(F: WeightingFunctor, radius: int) -> list[int]:
    out = []
    for R in range(radius + 1):
        acc: Subspace | None = None
        for r in weight_grid(F.n, -R, R):
            part = F.ideal_part(r, F.D)
            acc = part if acc is None else acc.intersect(part)
            if not acc.dim:
                break
        out.append(acc.dim if acc is not None else 0)
    return out


@dataclass
class WeightOmegaReport:
    m: int
    passed: bool
    operators_checked: int
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"m": self.m, "passed": self.passed, "operators_checked": self.operators_checked,
                "counterexample": self.counterexample}


def omega_on_weights(a, V, m: int, grid: Sequence, bound: int) -> WeightOmegaReport:
    """The omega operators with |alpha|, |beta| <= bound act by zero on every M^r."""
    F = WeightingFunctor(a, V, bound + m)
    n = F.n
    idx = mi.up_to_degree(n, bound)
    count = 0
    for alpha in idx:
        for beta in idx:
            for j, l, p in product(range(n), repeat=3):
                count += 1
                ej = mi.unit(n, j)
                parts = []
                for i in range(m + 1):
                    x = (mi.add(alpha, tuple((m - i) * e for e in ej)), l)
                    y = (mi.add(beta, tuple(i * e for e in ej)), p)
                    parts.append(((-1) ** i * comb(m, i), x, y))
                for r in grid:
                    r = as_weight(r)
                    total = zeros(F.dim, F.dim)
                    for c, x, y in parts:
                        prod_ = matmul(F.action(x, _shifted(r, shift_of(y))), F.action(y, r))
                        for row, prow in zip(total, prod_):
                            for k, v in enumerate(prow):
                                row[k] += c * v
                    if any(v for row in total for v in row):
                        return WeightOmegaReport(m, False, count, {
                            "alpha": list(alpha), "beta": list(beta),
                            "j": j + 1, "l": l + 1, "p": p + 1, "weight": [str(v) for v in r]})
    return WeightOmegaReport(m, True, count)
