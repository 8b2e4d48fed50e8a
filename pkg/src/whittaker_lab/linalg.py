"""Exact linear algebra over Q.

Matrices are lists of rows of ``Fraction``; vectors are lists.  Internally
rows are held sparsely (``{col: value}``) while reducing, since almost every
operator matrix assembled in this package is sparse.  The reduced row echelon
form of a matrix is unique, so the result does not depend on elimination
order and reports are stable across runs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]
SparseRow = dict[int, Fraction]


class LinAlgError(ValueError):
    pass


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def shape(A: Sequence[Sequence], ncols: int | None = None) -> tuple[int, int]:
    if ncols is not None:
        return len(A), ncols
    if A:
        return len(A), len(A[0])
    return 0, 0


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    if A and B and len(A[0]) != len(B):
        raise LinAlgError(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [Fraction(0)] * cols
        for k, x in enumerate(row):
            if x:
                for j, y in enumerate(B[k]):
                    if y:
                        acc[j] += x * y
        out.append(acc)
    return out


def matvec(A: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in A]


def transpose(A: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*A)]


def is_zero(A: Sequence[Sequence]) -> bool:
    return all(not x for row in A for x in row)


def to_sparse(row: Sequence) -> SparseRow:
    return {j: Fraction(x) for j, x in enumerate(row) if x}


def to_dense(row: SparseRow, ncols: int) -> list[Fraction]:
    out = [Fraction(0)] * ncols
    for j, x in row.items():
        out[j] = x
    return out


class Echelon:
    """Incrementally maintained reduced row echelon form.

    ``pivots`` maps pivot column to a row that is 1 there and 0 in every other
    pivot column.
    """

    __slots__ = ("ncols", "pivots")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, SparseRow] = {}

    def reduce(self, row: SparseRow) -> SparseRow:
        v = dict(row)
        for c in sorted(c for c in v if c in self.pivots):
            x = v.get(c)
            if not x:
                continue
            for j, y in self.pivots[c].items():
                z = v.get(j, 0) - x * y
                if z:
                    v[j] = z
                else:
                    v.pop(j, None)
        return v

    def add(self, row: SparseRow) -> bool:
        """Insert a row; returns True when it raised the rank."""
        v = self.reduce(row)
        if not v:
            return False
        lead = min(v)
        inv = Fraction(1) / v[lead]
        v = {j: x * inv for j, x in v.items()}
        for c, prow in self.pivots.items():
            x = prow.get(lead)
            if x:
                for j, y in v.items():
                    z = prow.get(j, 0) - x * y
                    if z:
                        prow[j] = z
                    else:
                        prow.pop(j, None)
        self.pivots[lead] = v
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rows(self) -> list[SparseRow]:
        return [self.pivots[c] for c in sorted(self.pivots)]


def _echelon(A: Sequence[Sequence], ncols: int | None = None) -> Echelon:
    _, c = shape(A, ncols)
    ech = Echelon(c)
    for row in A:
        ech.add(row if isinstance(row, dict) else to_sparse(row))
    return ech


def rref(A: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns.

    The returned matrix has the same shape as ``A`` (zero rows at the bottom).
    """
    r, c = shape(A, ncols)
    ech = _echelon(A, c)
    piv = sorted(ech.pivots)
    R = [to_dense(ech.pivots[p], c) for p in piv]
    R.extend([Fraction(0)] * c for _ in range(r - len(R)))
    return R, len(piv), piv


def rank(A: Sequence[Sequence], ncols: int | None = None) -> int:
    return _echelon(A, ncols).rank


def kernel_basis(A: Sequence[Sequence], ncols: int | None = None) -> "Subspace":
    """Null space {x : A x = 0} as a Subspace of Q^cols."""
    _, c = shape(A, ncols)
    ech = _echelon(A, c)
    vecs = []
    for f in range(c):
        if f in ech.pivots:
            continue
        v = {f: Fraction(1)}
        for p, row in ech.pivots.items():
            x = row.get(f)
            if x:
                v[p] = -x
        vecs.append(v)
    return Subspace(c, vecs)


def solve(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """A particular solution of A x = b, or None when inconsistent."""
    r, c = shape(A)
    if len(b) != r:
        raise LinAlgError(f"right-hand side has length {len(b)}, expected {r}")
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    ech = _echelon(aug, c + 1)
    if c in ech.pivots:
        return None
    x = [Fraction(0)] * c
    for p, row in ech.pivots.items():
        x[p] = row.get(c, Fraction(0))
    return x


def inverse(A: Sequence[Sequence]) -> Matrix:
    r, c = shape(A)
    if r != c:
        raise LinAlgError("inverse of a non-square matrix")
    aug = [list(row) + [Fraction(int(i == j)) for j in range(r)] for i, row in enumerate(A)]
    ech = _echelon(aug, 2 * r)
    if any(p not in ech.pivots for p in range(r)):
        raise LinAlgError("matrix is singular")
    return [to_dense(ech.pivots[p], 2 * r)[r:] for p in range(r)]


class Subspace:
    """A subspace of Q^ambient held by its reduced echelon basis."""

    __slots__ = ("ambient", "_ech")

    def __init__(self, ambient: int, vectors: Iterable = ()):
        self.ambient = ambient
        self._ech = Echelon(ambient)
        for v in vectors:
            self._ech.add(v if isinstance(v, dict) else to_sparse(v))

    @classmethod
    def column_space(cls, A: Sequence[Sequence], nrows: int | None = None) -> "Subspace":
        r = len(A) if A else (nrows or 0)
        return cls(r, transpose(A) if A else [])

    @classmethod
    def whole(cls, ambient: int) -> "Subspace":
        return cls(ambient, ({i: Fraction(1)} for i in range(ambient)))

    @property
    def dim(self) -> int:
        return self._ech.rank

    @property
    def pivots(self) -> list[int]:
        return sorted(self._ech.pivots)

    def sparse_basis(self) -> list[SparseRow]:
        return [dict(r) for r in self._ech.rows()]

    @property
    def basis(self) -> Matrix:
        return [to_dense(r, self.ambient) for r in self._ech.rows()]

    def add(self, v) -> bool:
        """Extend in place; True when the dimension grew."""
        return self._ech.add(v if isinstance(v, dict) else to_sparse(v))

    def contains(self, v) -> bool:
        row = v if isinstance(v, dict) else to_sparse(v)
        return not self._ech.reduce(row)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other._ech.rows())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self._ech.rows() == other._ech.rows()

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient, self._ech.rows() + other._ech.rows())

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of [B1^T | -B2^T]."""
        if self.ambient != other.ambient:
            raise LinAlgError("ambient dimension mismatch")
        b1, b2 = self._ech.rows(), other._ech.rows()
        if not b1 or not b2:
            return Subspace(self.ambient)
        # columns of M are the basis vectors of both spaces
        k1 = len(b1)
        M: list[SparseRow] = [dict() for _ in range(self.ambient)]
        for idx, row in enumerate(b1):
            for j, x in row.items():
                M[j][idx] = x
        for idx, row in enumerate(b2):
            for j, x in row.items():
                M[j][k1 + idx] = -x
        ker = kernel_basis(M, k1 + len(b2))
        vecs = []
        for coeffs in ker.sparse_basis():
            v: SparseRow = {}
            for idx, c in coeffs.items():
                if idx < k1:
                    for j, x in b1[idx].items():
                        v[j] = v.get(j, 0) + c * x
            vecs.append({j: x for j, x in v.items() if x})
        return Subspace(self.ambient, vecs)

    def __repr__(self) -> str:
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"
