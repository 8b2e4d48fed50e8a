"""The Weyl algebra D_n in normal order (all t's left of all d's).

An element is a map ``(m, r) -> coeff`` standing for sum coeff * t^m d^r.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from . import index as mi
from .index import DimensionError, MultiIndex
from .poly import Poly, format_terms, monomial_str


@lru_cache(maxsize=200_000)
def _mono_product(a: MultiIndex, b: MultiIndex, c: MultiIndex, d: MultiIndex):
    """(t^a d^b)(t^c d^d) as a tuple of ((m, r), coeff).

    Uses d^b t^c = sum_s binom(b, s) * falling(c, s) * t^(c-s) d^(b-s).
    """
    out = []
    for s in mi.box(tuple(min(x, y) for x, y in zip(b, c))):
        coef = mi.binom_multi(b, s) * mi.falling_multi(c, s)
        out.append(((mi.add(a, mi.sub(c, s)), mi.add(mi.sub(b, s), d)), coef))
    return tuple(out)


def _accumulate(out: dict, key, value) -> None:
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class WeylElement:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        self.terms: dict[tuple[MultiIndex, MultiIndex], Fraction] = {}
        for (m, r), c in (terms or {}).items():
            m, r = tuple(m), tuple(r)
            if len(m) != n or len(r) != n:
                raise DimensionError(f"bad index pair {(m, r)} for n={n}")
            if c:
                _accumulate(self.terms, (m, r), Fraction(c))

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "WeylElement":
        x = cls.__new__(cls)
        x.n = n
        x.terms = terms
        return x

    @classmethod
    def monomial(cls, m: MultiIndex, r: MultiIndex, c=1) -> "WeylElement":
        return cls(len(m), {(tuple(m), tuple(r)): c})

    @classmethod
    def scalar(cls, n: int, c=1) -> "WeylElement":
        return cls(n, {(mi.zero(n), mi.zero(n)): c})

    @classmethod
    def t(cls, n: int, i: int) -> "WeylElement":
        return cls.monomial(mi.unit(n, i), mi.zero(n))

    @classmethod
    def d(cls, n: int, i: int) -> "WeylElement":
        return cls.monomial(mi.zero(n), mi.unit(n, i))

    @classmethod
    def from_poly(cls, f: Poly) -> "WeylElement":
        z = mi.zero(f.n)
        return cls._raw(f.n, {(m, z): c for m, c in f.terms.items()})

    def _check(self, other: "WeylElement") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def items(self):
        key = lambda mr: (sum(mr[0]) + sum(mr[1]), mi.order_key(mr[0]), mi.order_key(mr[1]))
        for k in sorted(self.terms, key=key):
            yield k, self.terms[k]

    def __neg__(self) -> "WeylElement":
        return WeylElement._raw(self.n, {k: -c for k, c in self.terms.items()})

    def __add__(self, other: "WeylElement") -> "WeylElement":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _accumulate(out, k, c)
        return WeylElement._raw(self.n, out)

    def __sub__(self, other: "WeylElement") -> "WeylElement":
        return self + (-other)

    def scale(self, c) -> "WeylElement":
        if not c:
            return WeylElement(self.n)
        return WeylElement._raw(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "WeylElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, WeylElement):
            return NotImplemented
        self._check(other)
        out: dict = {}
        for (a, b), x in self.terms.items():
            for (c, d), y in other.terms.items():
                xy = x * y
                for key, coef in _mono_product(a, b, c, d):
                    _accumulate(out, key, xy * coef)
        return WeylElement._raw(self.n, out)

    def __rmul__(self, other) -> "WeylElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def commutator(self, other: "WeylElement") -> "WeylElement":
        return self * other - other * self

    def is_polynomial(self) -> bool:
        return all(not any(r) for (_, r) in self.terms)

    def to_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("element contains derivatives")
        return Poly(self.n, {m: c for (m, _), c in self.terms.items()})

    def act(self, f: Poly) -> Poly:
        """The natural action of D_n on A_n."""
        if f.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {f.n}")
        out: dict = {}
        for (m, r), x in self.terms.items():
            for c, y in f.terms.items():
                ff = mi.falling_multi(c, r)
                if ff:
                    _accumulate(out, mi.add(m, mi.sub(c, r)), x * y * ff)
        return Poly._raw(self.n, out)

    def degree(self) -> int:
        """Bernstein degree |m| + |r| (-1 for zero)."""
        return max((sum(m) + sum(r) for m, r in self.terms), default=-1)

    def __str__(self) -> str:
        def mono(m, r):
            return "*".join(x for x in (monomial_str(m, "t"), monomial_str(r, "d")) if x)

        return format_terms((mono(m, r), c) for (m, r), c in self.items())

    def __repr__(self) -> str:
        return f"WeylElement({self.n}, {self})"


def weyl_mul(X: WeylElement, Y: WeylElement) -> WeylElement:
    return X * Y


@dataclass(frozen=True)
class WhittakerType:
    """The character d_i -> a_i of Delta_n."""

    a: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(Fraction(x) for x in self.a))
        if not self.a:
            raise ValueError("Whittaker type needs n >= 1 entries")

    @classmethod
    def parse(cls, text: str) -> "WhittakerType":
        from .textio import parse_rationals
        return cls(parse_rationals(text, "a"))

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def nonsingular(self) -> bool:
        return all(x != 0 for x in self.a)

    def __neg__(self) -> "WhittakerType":
        return WhittakerType(tuple(-x for x in self.a))

    def __getitem__(self, i: int) -> Fraction:
        return self.a[i]

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.a)


class SingularTypeError(ValueError):
    """A construction that needs every a_i != 0 got a singular type."""


def as_type(a) -> WhittakerType:
    if isinstance(a, WhittakerType):
        return a
    if isinstance(a, str):
        return WhittakerType.parse(a)
    return WhittakerType(tuple(a))


def require_nonsingular(a: WhittakerType) -> None:
    if not a.nonsingular:
        raise SingularTypeError(f"Whittaker type ({a}) is singular; every a_i must be nonzero")


def sigma_twist(a, X: WeylElement) -> WeylElement:
    """Image under t_i -> t_i, d_i -> d_i + a_i."""
    a = as_type(a)
    if a.n != X.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {X.n}")
    out: dict = {}
    for (m, r), c in X.terms.items():
        for s in mi.box(r):
            w = c * mi.binom_multi(r, s)
            for ai, ri, si in zip(a.a, r, s):
                if ri > si:
                    w *= ai ** (ri - si)
            if w:
                _accumulate(out, (m, s), w)
    return WeylElement._raw(X.n, out)


def act_twisted(a, X: WeylElement, f: Poly) -> Poly:
    """X . f on the twisted module A_n^a, i.e. sigma_a(X) f."""
    return sigma_twist(a, X).act(f)


def shifted_partial(a, i: int) -> WeylElement:
    """The operator d_i - a_i, which acts on A_n^a as the plain derivative."""
    a = as_type(a)
    return WeylElement.d(a.n, i) - WeylElement.scalar(a.n, a.a[i])


@dataclass
class Reduction:
    axes: list[int]
    steps: list[WeylElement]
    scalar: Fraction


def reduce_to_constant(a, f: Poly) -> Reduction:
    """Drive a nonzero f down to a nonzero constant with operators d_i - a_i.

    Each step differentiates along the first axis of largest t_i-degree, so
    the t_i-degree strictly drops; this witnesses that the submodule of A_n^a
    generated by f contains 1.
    """
    a = as_type(a)
    if f.n != a.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {f.n}")
    if f.is_zero():
        raise ValueError("cannot reduce the zero polynomial")
    axes, steps = [], []
    while f.degree() > 0:
        degs = [f.degree_in(i) for i in range(f.n)]
        i = degs.index(max(degs))
        op = shifted_partial(a, i)
        f = act_twisted(a, op, f)
        axes.append(i)
        steps.append(op)
    return Reduction(axes, steps, f.at_zero())
