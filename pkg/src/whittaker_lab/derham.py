"""The twisted de Rham complex of tensor modules over the exterior powers.

    0 -> T(A_n^a, L^0) -> T(A_n^a, L^1) -> ... -> T(A_n^a, L^n) -> 0

with pi_(k-1)(p (x) v) = sum_j (d_j . p) (x) (e_j ^ v), where d_j acts on
A_n^a as d_j + a_j.  Every pi preserves or lowers degree, so all checks run
exactly on degree-<=D truncations.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

from .glmod import exterior_subsets, make_exterior
from .linalg import Matrix, Subspace, is_zero, kernel_basis, matmul, rank
from .weyl import as_type, require_nonsingular
from .whittaker import TensorElement, TensorModule, matrix_between
from .witt import generators


def wedge_with(j: int, S: tuple[int, ...]) -> tuple[int, tuple[int, ...] | None]:
    """e_j ^ e_S as (sign, sorted subset); sign 0 when j is already in S."""
    if j in S:
        return 0, None
    below = sum(1 for s in S if s < j)
    return (-1) ** below, tuple(sorted(S + (j,)))


class DeRhamComplex:
    def __init__(self, a):
        self.a = as_type(a)
        self.n = self.a.n
        self.stages = [TensorModule(self.a, make_exterior(self.n, k)) for k in range(self.n + 1)]
        self._subsets = [exterior_subsets(self.n, k) for k in range(self.n + 1)]
        self._pos = [{S: i for i, S in enumerate(s)} for s in self._subsets]
        self._matrices: dict[tuple[int, int], Matrix] = {}

    def pi(self, k: int, w: TensorElement) -> TensorElement:
        """pi_k : T(L^k) -> T(L^(k+1)), for 0 <= k < n."""
        if not 0 <= k < self.n:
            raise ValueError(f"pi_{k} is not defined for n={self.n}")
        a = self.a.a
        subsets, pos = self._subsets[k], self._pos[k + 1]
        out: dict = {}
        for (r, b), c in w.terms.items():
            S = subsets[b]
            for j in range(self.n):
                sign, T = wedge_with(j, S)
                if not sign:
                    continue
                idx = pos[T]
                # (d_j + a_j) t^r = r_j t^(r - e_j) + a_j t^r
                if r[j]:
                    key = (r[:j] + (r[j] - 1,) + r[j + 1:], idx)
                    out[key] = out.get(key, 0) + sign * c * r[j]
                if a[j]:
                    key = (r, idx)
                    out[key] = out.get(key, 0) + sign * c * a[j]
        return TensorElement._raw(self.stages[k + 1].V, {k_: v for k_, v in out.items() if v})

    def matrix(self, k: int, D: int) -> Matrix:
        """Matrix of pi_k on degree-<=D truncations (rows: T(L^(k+1)))."""
        key = (k, D)
        if key not in self._matrices:
            self._matrices[key] = matrix_between(
                self.stages[k], self.stages[k + 1], lambda w: self.pi(k, w), D, D)
        return self._matrices[key]

    def truncation_dim(self, k: int, D: int) -> int:
        return comb(D + self.n, self.n) * comb(self.n, k)


def pi_map(a, n: int, k: int, D: int) -> Matrix:
    """Matrix of pi_(k-1) : T(L^(k-1)) -> T(L^k) on degree-<=D truncations."""
    a = as_type(a)
    if a.n != n:
        raise ValueError(f"type has length {a.n}, expected n={n}")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    return DeRhamComplex(a).matrix(k - 1, D)


@dataclass
class StageReport:
    k: int
    dim: int
    dim_ker: int
    dim_im_prev: int

    @property
    def exact(self) -> bool:
        return self.dim_ker == self.dim_im_prev

    @property
    def defect(self) -> int:
        return self.dim_ker - self.dim_im_prev

    def to_json(self) -> dict:
        return {"k": self.k, "dim": self.dim, "dim_ker": self.dim_ker,
                "dim_im_prev": self.dim_im_prev, "defect": self.defect, "exact": self.exact}


@dataclass
class ComplexReport:
    a: tuple
    n: int
    deg: int
    d2_zero: bool
    stages: list[StageReport] = field(default_factory=list)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** s.k * s.dim for s in self.stages)

    @property
    def exact(self) -> bool:
        return all(s.exact for s in self.stages)

    @property
    def nonsingular(self) -> bool:
        return all(x != 0 for x in self.a)

    @property
    def passed(self) -> bool:
        ok = self.d2_zero and self.euler_characteristic == 0
        if self.nonsingular:
            ok = ok and self.exact
        else:
            ok = ok and self.stages[0].defect == 1
        return ok

    def to_json(self) -> dict:
        return {
            "a": [str(x) for x in self.a],
            "n": self.n,
            "deg": self.deg,
            "mode": "exactness" if self.nonsingular else "singular-defect",
            "d2_zero": self.d2_zero,
            "exact": self.exact,
            "euler_characteristic": self.euler_characteristic,
            "stages": [s.to_json() for s in self.stages],
            "passed": self.passed,
        }


def verify_complex(a, n: int, D: int) -> ComplexReport:
    """d^2 = 0, per-stage kernel/image dimensions and the Euler characteristic.

    The kernel dimension comes from an explicit null-space basis and the image
    dimension from a rank computation, so the two sides are computed apart.
    """
    a = as_type(a)
    if a.n != n:
        raise ValueError(f"type has length {a.n}, expected n={n}")
    cx = DeRhamComplex(a)
    mats = [cx.matrix(k, D) for k in range(n)]
    d2 = all(is_zero(matmul(mats[k], mats[k - 1])) for k in range(1, n))
    report = ComplexReport(a.a, n, D, d2)
    for k in range(n + 1):
        dim = cx.truncation_dim(k, D)
        ker = kernel_basis(mats[k], dim).dim if k < n else dim
        im = rank(mats[k - 1], cx.truncation_dim(k - 1, D)) if k > 0 else 0
        report.stages.append(StageReport(k, dim, ker, im))
    return report


def singular_defect(n: int, D: int) -> list[int]:
    """dim ker pi_k / im pi_(k-1) per stage at a = 0."""
    return [s.defect for s in verify_complex((0,) * n, n, D).stages]


def check_equivariance(a, n: int, D: int) -> tuple[bool, dict | None]:
    """pi_k(X w) == X pi_k(w) for generators |m| <= D-1 and basis w of degree <= D."""
    cx = DeRhamComplex(a)
    for k in range(n):
        src, dst = cx.stages[k], cx.stages[k + 1]
        for g in generators(n, max(D - 1, 0)):
            for key in src.basis(D):
                w = TensorElement._raw(src.V, {key: 1})
                if cx.pi(k, src.act_generator(g, w)) != dst.act_generator(g, cx.pi(k, w)):
                    return False, {"k": k, "generator": list(g[0]) + [g[1]], "basis": str(w)}
    return True, None


class TruncatedSubmodule:
    """A W_n-submodule of a tensor module, seen through its truncations."""

    def __init__(self, module: TensorModule, D: int):
        self.module = module
        self.D = D
        self._cache: dict[int, Subspace] = {}

    @property
    def n(self) -> int:
        return self.module.n

    def subspace_at(self, D: int) -> Subspace:
        if D not in self._cache:
            self._cache[D] = self._build(D)
        return self._cache[D]

    def _build(self, D: int) -> Subspace:
        return Subspace.whole(len(self.module.basis(D)))

    @property
    def subspace(self) -> Subspace:
        return self.subspace_at(self.D)

    def act(self, X, w: TensorElement) -> TensorElement:
        """The W_n action on a member (the result may leave the truncation)."""
        return self.module.act(X, w)

    def member(self, vec) -> TensorElement:
        return self.module.from_coords(vec, self.D)

    def whittaker_dim(self) -> int:
        wh = self.module.whittaker_vectors(self.D)
        return wh.intersect(self.subspace).dim


class FullModule(TruncatedSubmodule):
    """The whole of T(A_n^a, V); used as the reducible contrast case."""


class ImageSubmodule(TruncatedSubmodule):
    def __init__(self, complex_: DeRhamComplex, k: int, D: int):
        super().__init__(complex_.stages[k], D)
        self.complex = complex_
        self.k = k

    def _build(self, D: int) -> Subspace:
        # the image meets the degree-<=D part exactly in pi(T_<=D), since pi
        # is degree-filtered and the complex is exact at truncation
        return Subspace.column_space(self.complex.matrix(self.k - 1, D),
                                     len(self.module.basis(D)))


def image_submodule(a, n: int, k: int, D: int) -> ImageSubmodule:
    """Im pi_(k-1) inside T(A_n^a, L^k), for nonsingular a."""
    a = as_type(a)
    require_nonsingular(a)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    return ImageSubmodule(DeRhamComplex(a), k, D)


@dataclass
class ProbeReport:
    seed: int
    trials: int
    passes: int
    details: list[dict]

    @property
    def passed(self) -> bool:
        return self.passes == self.trials

    def to_json(self) -> dict:
        return {"seed": self.seed, "trials": self.trials, "passes": self.passes,
                "passed": self.passed, "details": self.details}


def _random_member(sub: TruncatedSubmodule, rng: random.Random) -> TensorElement:
    basis = sub.subspace.sparse_basis()
    while True:
        vec: dict = {}
        for row in basis:
            c = rng.randint(-3, 3)
            if c:
                for j, x in row.items():
                    vec[j] = vec.get(j, 0) + c * x
        vec = {j: x for j, x in vec.items() if x}
        if vec:
            return sub.member(vec)


def cyclicity_evidence(sub: TruncatedSubmodule, w: TensorElement) -> dict:
    """Does span{w, u w, u u' w} contain the degree-<=(D-2) part of the submodule?

    u, u' range over generators t^m d_k with |m| <= D.  Length-two words are
    added one first letter at a time and the search stops once the target is
    covered, so ``span_dim`` is the dimension reached at that point.
    """
    T, D = sub.module, sub.D
    gens = generators(T.n, D)
    # t^m d_k raises degree by at most |m| (the a_k t^m term)
    big = max(w.degree(), 0) + 2 * D
    big = max(big, D)
    pos = {k: i for i, k in enumerate(T.basis(big))}
    # basis(D - 2) is a prefix of basis(big), so coordinates carry over
    target = sub.subspace_at(max(D - 2, 0)).sparse_basis()
    span = Subspace(len(pos))

    def covered() -> bool:
        return all(span.contains(row) for row in target)

    first = [T.act_generator(g, w) for g in gens]
    for v in [w] + first:
        if v:
            span.add(T.coords(v, big, pos))
    done = covered()
    words = 1 + len(first)
    for x in first:
        if done:
            break
        for g in gens:
            v = T.act_generator(g, x)
            if v:
                span.add(T.coords(v, big, pos))
        words += len(gens)
        done = covered()
    return {"span_dim": span.dim, "target_dim": len(target), "words": words,
            "contains_target": done}


def cyclicity_probe(sub: TruncatedSubmodule, trials: int = 10, seed: int = 0,
                    allow_singular: bool = False) -> ProbeReport:
    if not allow_singular:
        require_nonsingular(sub.module.a)
    rng = random.Random(seed)
    details = []
    for t in range(trials):
        w = _random_member(sub, rng)
        info = cyclicity_evidence(sub, w)
        info["trial"] = t
        info["member"] = str(w)
        details.append(info)
    passes = sum(d["contains_target"] for d in details)
    return ProbeReport(seed, trials, passes, details)
