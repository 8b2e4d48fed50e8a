"""Finite-dimensional gl_n-modules given by explicit matrices E_ij.

Built-ins are the exterior powers of the natural module (k = 0 is the trivial
module, k = 1 the natural one).  Custom modules come from JSON and are
checked against [E_ij, E_kl] = delta_jk E_il - delta_li E_kj on construction.
Axes are 0-based here; JSON keys ``"1,2"`` are 1-based.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from .linalg import Matrix, matmul, zeros
from .witt import WittElement, jet_project


class GlRelationError(ValueError):
    def __init__(self, witness: tuple[int, int, int, int]):
        i, j, k, l = witness
        super().__init__(f"[E_{i + 1}{j + 1}, E_{k + 1}{l + 1}] violates the gl_n relations")
        self.witness = witness


def _sub(A: Matrix, B: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


class GlModule:
    __slots__ = ("n", "dim", "E", "labels", "name", "_cols")

    def __init__(self, n: int, dim: int, E: Mapping[tuple[int, int], Sequence[Sequence]],
                 labels: Sequence[str] | None = None, name: str = "custom", check: bool = True):
        self.n = n
        self.dim = dim
        self.name = name
        self.labels = list(labels) if labels is not None else [f"v{j + 1}" for j in range(dim)]
        self.E: dict[tuple[int, int], Matrix] = {}
        for i in range(n):
            for j in range(n):
                M = E.get((i, j))
                M = zeros(dim, dim) if M is None else [[Fraction(x) for x in row] for row in M]
                if len(M) != dim or any(len(row) != dim for row in M):
                    raise ValueError(f"E_{i + 1}{j + 1} must be {dim}x{dim}")
                self.E[(i, j)] = M
        # column b of E_ij as a sparse {row: value}
        self._cols = {
            ij: [{r: M[r][b] for r in range(dim) if M[r][b]} for b in range(dim)]
            for ij, M in self.E.items()
        }
        if check:
            ok, witness = check_gl_relations(self)
            if not ok:
                raise GlRelationError(witness)

    def column(self, i: int, j: int, b: int) -> dict[int, Fraction]:
        return self._cols[(i, j)][b]

    def apply(self, i: int, j: int, v: Sequence) -> list[Fraction]:
        """E_ij v."""
        out = [Fraction(0)] * self.dim
        for b, x in enumerate(v):
            if x:
                for r, y in self._cols[(i, j)][b].items():
                    out[r] += x * y
        return out

    def apply_gl(self, g: Sequence[Sequence], v: Sequence) -> list[Fraction]:
        """sum_ij g[i][j] E_ij v."""
        out = [Fraction(0)] * self.dim
        for i in range(self.n):
            for j in range(self.n):
                if g[i][j]:
                    for r, x in enumerate(self.apply(i, j, v)):
                        out[r] += g[i][j] * x
        return out

    def __repr__(self) -> str:
        return f"GlModule(n={self.n}, dim={self.dim}, {self.name})"


def check_gl_relations(V: GlModule) -> tuple[bool, tuple[int, int, int, int] | None]:
    n = V.n
    Z = zeros(V.dim, V.dim)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    lhs = _sub(matmul(V.E[(i, j)], V.E[(k, l)]), matmul(V.E[(k, l)], V.E[(i, j)]))
                    rhs = Z
                    if j == k:
                        rhs = V.E[(i, l)]
                    if l == i:
                        rhs = _sub(rhs, V.E[(k, j)])
                    if lhs != rhs:
                        return False, (i, j, k, l)
    return True, None


def _wedge_replace(S: tuple[int, ...], i: int, j: int) -> tuple[int, tuple[int, ...] | None]:
    """e_ij acting on e_S: (sign, new subset) or (0, None)."""
    if j not in S:
        return 0, None
    if i == j:
        return 1, S
    if i in S:
        return 0, None
    lo, hi = min(i, j), max(i, j)
    between = sum(1 for s in S if lo < s < hi)
    return (-1) ** between, tuple(sorted(set(S) - {j} | {i}))


def make_exterior(n: int, k: int) -> GlModule:
    """k-th exterior power of the natural module, basis e_S in lex order."""
    if not 0 <= k <= n:
        raise ValueError(f"exterior degree k={k} out of range 0..{n}")
    subsets = list(combinations(range(n), k))
    pos = {S: idx for idx, S in enumerate(subsets)}
    E = {}
    for i in range(n):
        for j in range(n):
            M = zeros(len(subsets), len(subsets))
            for S in subsets:
                sign, T = _wedge_replace(S, i, j)
                if sign:
                    M[pos[T]][pos[S]] = Fraction(sign)
            E[(i, j)] = M
    labels = ["^".join(f"e{s + 1}" for s in S) or "1" for S in subsets]
    assert len(subsets) == comb(n, k)
    return GlModule(n, len(subsets), E, labels, name=f"exterior:{k}", check=False)


def trivial(n: int) -> GlModule:
    return make_exterior(n, 0)


def natural(n: int) -> GlModule:
    return make_exterior(n, 1)


def exterior_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), k))


def module_from_spec(n: int, spec) -> GlModule:
    """Build from 'trivial', 'natural', 'exterior:k' or a JSON-style dict."""
    if isinstance(spec, GlModule):
        return spec
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        spec = {"type": kind}
        if arg:
            spec["k"] = int(arg)
    kind = spec.get("type")
    if kind == "trivial":
        return trivial(n)
    if kind == "natural":
        return natural(n)
    if kind == "exterior":
        return make_exterior(n, int(spec["k"]))
    if kind == "custom":
        dim = int(spec["dim"])
        E = {}
        for key, M in spec.get("E", {}).items():
            i, j = (int(x) - 1 for x in key.split(","))
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"E key {key!r} out of range for n={n}")
            E[(i, j)] = [[Fraction(x) for x in row] for row in M]
        return GlModule(n, dim, E, spec.get("labels"), name="custom")
    raise ValueError(f"unknown module type {kind!r}")


def module_to_spec(V: GlModule) -> dict:
    if V.name.startswith("exterior:"):
        return {"type": "exterior", "k": int(V.name.split(":")[1])}
    return {
        "type": "custom",
        "dim": V.dim,
        "E": {f"{i + 1},{j + 1}": [[str(x) for x in row] for row in M]
              for (i, j), M in V.E.items() if any(x for row in M for x in row)},
    }


def ln_act(V: GlModule, X: WittElement, v: Sequence) -> list[Fraction]:
    """L_n acts through the jet projection; m^2 Delta_n acts by zero."""
    if len(v) != V.dim:
        raise ValueError(f"vector has length {len(v)}, module dimension is {V.dim}")
    return V.apply_gl(jet_project(X), v)
