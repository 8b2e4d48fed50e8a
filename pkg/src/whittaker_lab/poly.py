"""Sparse polynomials in A_n = Q[t_1, ..., t_n].

Axes are 0-based in the Python API (``partial(0, f)`` is d/dt_1); the text
form printed and parsed by the CLI keeps the 1-based names ``t1, t2, ...``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from . import index as mi
from .index import DimensionError, MultiIndex


def _fmt_coeff(c: Fraction, first: bool, has_rest: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    a = abs(c)
    body = "" if (a == 1 and has_rest) else str(a)
    if not first:
        sign = f" {sign} "
    return sign + body


def monomial_str(m: MultiIndex, var: str = "t") -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(f"{var}{i + 1}")
        elif e > 1:
            parts.append(f"{var}{i + 1}^{e}")
    return "*".join(parts)


def format_terms(items: Iterable[tuple[str, Fraction]]) -> str:
    """Render (monomial text, coefficient) pairs as '3/2*t1^2*d1 - t2'."""
    out = []
    for mono, c in items:
        head = _fmt_coeff(c, not out, bool(mono))
        if mono:
            sep = "*" if head.strip(" +-") else ""
            out.append(f"{head}{sep}{mono}")
        else:
            out.append(head)
    return "".join(out) or "0"


class Poly:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[MultiIndex, object] | None = None):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.n = n
        self.terms: dict[MultiIndex, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n or any(e < 0 for e in m):
                raise DimensionError(f"bad exponent {m} for n={n}")
            if c:
                self.terms[m] = self.terms.get(m, 0) + Fraction(c)
                if not self.terms[m]:
                    del self.terms[m]

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        return p

    @classmethod
    def constant(cls, n: int, c=1) -> "Poly":
        return cls(n, {mi.zero(n): c})

    @classmethod
    def monomial(cls, m: MultiIndex, c=1) -> "Poly":
        return cls(len(m), {tuple(m): c})

    @classmethod
    def var(cls, n: int, i: int) -> "Poly":
        return cls.monomial(mi.unit(n, i))

    def _check(self, other: "Poly") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[tuple[MultiIndex, Fraction]]:
        """Terms in the canonical (degree-then-lex) order."""
        for m in sorted(self.terms, key=mi.order_key):
            yield m, self.terms[m]

    def coeff(self, m: MultiIndex) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __neg__(self) -> "Poly":
        return Poly._raw(self.n, {m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.n, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c) -> "Poly":
        if not c:
            return Poly(self.n)
        return Poly._raw(self.n, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        out: dict[MultiIndex, Fraction] = {}
        for m, c in self.terms.items():
            for r, d in other.terms.items():
                k = mi.add(m, r)
                v = out.get(k, 0) + c * d
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return Poly._raw(self.n, out)

    def __rmul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Poly":
        out = Poly.constant(self.n)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, i: int) -> "Poly":
        if not 0 <= i < self.n:
            raise IndexError(f"axis {i} out of range for n={self.n}")
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                k = m[:i] + (m[i] - 1,) + m[i + 1:]
                out[k] = c * m[i]
        return Poly._raw(self.n, out)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def ideal_order(self) -> int:
        """Largest k with f in m^k, i.e. the least total degree of a term."""
        if not self.terms:
            raise ValueError("ideal order of the zero polynomial is undefined")
        return min(sum(m) for m in self.terms)

    def at_zero(self) -> Fraction:
        return self.coeff(mi.zero(self.n))

    def __call__(self, *point) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                v *= Fraction(x) ** e
            total += v
        return total

    def to_json(self) -> list[dict]:
        return [{"exponent": list(m), "coeff": str(c)} for m, c in self.items()]

    @classmethod
    def from_json(cls, n: int, data: list[dict]) -> "Poly":
        return cls(n, {tuple(t["exponent"]): Fraction(t["coeff"]) for t in data})

    def __str__(self) -> str:
        return format_terms((monomial_str(m), c) for m, c in self.items())

    def __repr__(self) -> str:
        return f"Poly({self.n}, {self})"


def poly_mul(f: Poly, g: Poly) -> Poly:
    return f * g


def partial(i: int, f: Poly) -> Poly:
    return f.diff(i)


def ideal_order(f: Poly) -> int:
    return f.ideal_order()
