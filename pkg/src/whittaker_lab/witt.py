"""The Witt algebra W_n = Der(A_n) and its distinguished subalgebras.

A ``WittElement`` is a map ``(m, i) -> coeff`` standing for
sum coeff * t^m d_i, with 0-based axis i.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping

from . import index as mi
from .index import DimensionError, MultiIndex
from .linalg import Matrix, zeros
from .poly import Poly, format_terms, monomial_str
from .weyl import WeylElement

Generator = tuple[MultiIndex, int]


def generator_key(g: Generator) -> tuple:
    """Ascending by |m|, then lex on m, then axis."""
    m, i = g
    return (sum(m), m, i)


def generators(n: int, max_deg: int, min_deg: int = 0) -> list[Generator]:
    """Basis elements t^m d_i with min_deg <= |m| <= max_deg, canonical order."""
    out = [(m, i) for m in mi.up_to_degree(n, max_deg) if sum(m) >= min_deg for i in range(n)]
    return sorted(out, key=generator_key)


def generator_bracket(x: Generator, y: Generator) -> dict[Generator, int]:
    """[t^m d_i, t^r d_j] = r_i t^(m+r-e_i) d_j - m_j t^(m+r-e_j) d_i."""
    (m, i), (r, j) = x, y
    out: dict[Generator, int] = {}
    s = mi.add(m, r)
    if r[i]:
        k = (s[:i] + (s[i] - 1,) + s[i + 1:], j)
        out[k] = out.get(k, 0) + r[i]
    if m[j]:
        k = (s[:j] + (s[j] - 1,) + s[j + 1:], i)
        out[k] = out.get(k, 0) - m[j]
    return {k: v for k, v in out.items() if v}


class WittElement:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        self.terms: dict[Generator, Fraction] = {}
        for (m, i), c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n or not 0 <= i < n:
                raise DimensionError(f"bad generator {(m, i)} for n={n}")
            if c:
                v = self.terms.get((m, i), 0) + Fraction(c)
                if v:
                    self.terms[(m, i)] = v
                else:
                    del self.terms[(m, i)]

    @classmethod
    def gen(cls, m: MultiIndex, i: int, c=1) -> "WittElement":
        return cls(len(m), {(tuple(m), i): c})

    @classmethod
    def d(cls, n: int, i: int) -> "WittElement":
        return cls.gen(mi.zero(n), i)

    @classmethod
    def h(cls, n: int, i: int) -> "WittElement":
        return cls.gen(mi.unit(n, i), i)

    def _check(self, other: "WittElement") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def items(self) -> Iterator[tuple[Generator, Fraction]]:
        for g in sorted(self.terms, key=generator_key):
            yield g, self.terms[g]

    def __neg__(self) -> "WittElement":
        return self.scale(-1)

    def __add__(self, other: "WittElement") -> "WittElement":
        self._check(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, 0) + c
        return WittElement(self.n, out)

    def __sub__(self, other: "WittElement") -> "WittElement":
        return self + other.scale(-1)

    def scale(self, c) -> "WittElement":
        return WittElement(self.n, {g: v * c for g, v in self.terms.items()})

    __rmul__ = scale

    def bracket(self, other: "WittElement") -> "WittElement":
        self._check(other)
        out: dict[Generator, Fraction] = {}
        for x, c in self.terms.items():
            for y, d in other.terms.items():
                for g, k in generator_bracket(x, y).items():
                    out[g] = out.get(g, 0) + c * d * k
        return WittElement(self.n, out)

    def act(self, f: Poly) -> Poly:
        """Derivation action on A_n."""
        out = Poly(self.n)
        for (m, i), c in self.terms.items():
            out = out + Poly.monomial(m, c) * f.diff(i)
        return out

    # membership predicates
    def in_delta(self) -> bool:
        return all(not any(m) for m, _ in self.terms)

    def in_cartan(self) -> bool:
        return all(sum(m) == 1 and m[i] == 1 for m, i in self.terms)

    def in_jet(self) -> bool:
        return all(sum(m) >= 1 for m, _ in self.terms)

    def in_jet_square(self) -> bool:
        return all(sum(m) >= 2 for m, _ in self.terms)

    def max_degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    def __str__(self) -> str:
        def mono(m, i):
            return "*".join(x for x in (monomial_str(m, "t"), f"d{i + 1}") if x)

        return format_terms((mono(m, i), c) for (m, i), c in self.items())

    def __repr__(self) -> str:
        return f"WittElement({self.n}, {self})"


def witt_bracket(X: WittElement, Y: WittElement) -> WittElement:
    return X.bracket(Y)


def as_weyl(X: WittElement) -> WeylElement:
    out = WeylElement(X.n)
    for (m, i), c in X.terms.items():
        out = out + WeylElement.monomial(m, mi.unit(X.n, i), c)
    return out


class NotInJetAlgebra(ValueError):
    """The element has a term with |m| = 0, so it is not in L_n."""


def jet_project(X: WittElement) -> Matrix:
    """L_n -> gl_n, t_i d_j -> e_ij; the m^2 Delta_n part is dropped."""
    if not X.in_jet():
        raise NotInJetAlgebra(f"{X} is not in L_n")
    out = zeros(X.n, X.n)
    for (m, j), c in X.terms.items():
        if sum(m) == 1:
            out[m.index(1)][j] += c
    return out
