"""PBW normal forms in U(L) and the tensor algebra D_n (x) U(L_n).

The rewriting engine only needs an ordered basis (a sort key) and a bracket
callback returning ``{basis element: coeff}``.  A word is a tuple of basis
elements; it is in normal form when weakly increasing.  Any adjacent descent
``y x`` (y > x) is rewritten to ``x y + [y, x]``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from . import index as mi
from .index import DimensionError
from .poly import format_terms, monomial_str
from .weyl import WeylElement, _mono_product
from .witt import Generator, WittElement, generator_bracket, generator_key

Word = tuple


def word_str(word: Word) -> str:
    """``[t1*d1][t1^2*d1]``; the empty word prints as ''."""
    return "".join(f"[{WittElement.gen(*g)}]" for g in word)


def _acc(out: dict, key, value) -> None:
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class EnvelopingAlgebra:
    def __init__(self, key: Callable[[Hashable], object],
                 bracket: Callable[[Hashable, Hashable], Mapping],
                 validate: Callable[[Hashable], bool] | None = None):
        self.key = key
        self.bracket = bracket
        self.validate = validate

    def _check_word(self, word: Sequence) -> None:
        if self.validate is not None:
            for g in word:
                if not self.validate(g):
                    raise ValueError(f"{g!r} is not a basis element of this Lie algebra")

    def normalize(self, word: Sequence, strategy: str = "leftmost",
                  memo: dict | None = None) -> "PBWElement":
        word = tuple(word)
        self._check_word(word)
        if strategy not in ("leftmost", "rightmost"):
            raise ValueError(f"unknown rewrite strategy {strategy!r}")
        memo = {} if memo is None else memo
        return PBWElement(self, self._nf(word, strategy == "leftmost", memo))

    def _nf(self, word: Word, leftmost: bool, memo: dict) -> dict:
        hit = memo.get(word)
        if hit is not None:
            return hit
        key = self.key
        keys = [key(g) for g in word]
        rng = range(len(word) - 1) if leftmost else range(len(word) - 2, -1, -1)
        pos = next((i for i in rng if keys[i] > keys[i + 1]), None)
        if pos is None:
            res = {word: Fraction(1)}
        else:
            y, x = word[pos], word[pos + 1]
            res = dict(self._nf(word[:pos] + (x, y) + word[pos + 2:], leftmost, memo))
            for z, c in self.bracket(y, x).items():
                for w, d in self._nf(word[:pos] + (z,) + word[pos + 2:], leftmost, memo).items():
                    _acc(res, w, c * d)
        memo[word] = res
        return res

    def one(self) -> "PBWElement":
        return PBWElement(self, {(): Fraction(1)})

    def gen(self, g, c=1) -> "PBWElement":
        self._check_word((g,))
        return PBWElement(self, {(g,): Fraction(c)})

    def word(self, word: Sequence) -> "PBWElement":
        return self.normalize(word)

    def mul(self, u: "PBWElement", v: "PBWElement", memo: dict | None = None) -> "PBWElement":
        memo = {} if memo is None else memo
        out: dict = {}
        for w1, c1 in u.terms.items():
            for w2, c2 in v.terms.items():
                for w, c in self._nf(w1 + w2, True, memo).items():
                    _acc(out, w, c1 * c2 * c)
        return PBWElement(self, out)


class PBWElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: EnvelopingAlgebra, terms: Mapping | None = None):
        self.algebra = algebra
        self.terms = {tuple(w): Fraction(c) for w, c in (terms or {}).items() if c}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PBWElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "PBWElement") -> "PBWElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            _acc(out, w, c)
        return PBWElement(self.algebra, out)

    def __sub__(self, other: "PBWElement") -> "PBWElement":
        return self + other.scale(-1)

    def scale(self, c) -> "PBWElement":
        return PBWElement(self.algebra, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.algebra.mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def filtration_degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def top(self) -> "PBWElement":
        d = self.filtration_degree()
        return PBWElement(self.algebra, {w: c for w, c in self.terms.items() if len(w) == d})

    def is_ordered(self) -> bool:
        key = self.algebra.key
        return all(key(w[i]) <= key(w[i + 1]) for w in self.terms for i in range(len(w) - 1))

    def __str__(self) -> str:
        return format_terms((word_str(w), c) for w, c in sorted(
            self.terms.items(), key=lambda kv: [generator_key(g) for g in kv[0]]))

    def __repr__(self) -> str:
        return f"PBWElement({self.terms})"


def jet_enveloping() -> EnvelopingAlgebra:
    """U(L_n) on generators (m, i) with |m| >= 1 (any n; n is read off m)."""
    return EnvelopingAlgebra(generator_key, generator_bracket, lambda g: sum(g[0]) >= 1)


def witt_enveloping() -> EnvelopingAlgebra:
    """U(W_n) on all generators (m, i); the same engine without the L_n guard."""
    return EnvelopingAlgebra(generator_key, generator_bracket)


U_JET = jet_enveloping()


def pbw_normalize(word: Sequence[Generator], strategy: str = "leftmost") -> PBWElement:
    return U_JET.normalize(word, strategy)


def pbw_mul(u: PBWElement, v: PBWElement) -> PBWElement:
    return u.algebra.mul(u, v)


class DnULnElement:
    """Element of D_n (x) U(L_n): map ((m, r), word) -> coeff."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        self.terms: dict = {}
        for ((m, r), w), c in (terms or {}).items():
            if len(m) != n or len(r) != n:
                raise DimensionError(f"bad Weyl index {(m, r)} for n={n}")
            if c:
                _acc(self.terms, ((tuple(m), tuple(r)), tuple(w)), Fraction(c))

    @classmethod
    def _raw(cls, n: int, terms: dict) -> "DnULnElement":
        x = cls.__new__(cls)
        x.n = n
        x.terms = terms
        return x

    @classmethod
    def from_parts(cls, d: WeylElement, u: PBWElement | None = None) -> "DnULnElement":
        uterms = u.terms if u is not None else {(): Fraction(1)}
        return cls._raw(d.n, {(k, w): c * e for k, c in d.terms.items() for w, e in uterms.items()})

    def _check(self, other: "DnULnElement") -> None:
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DnULnElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __add__(self, other: "DnULnElement") -> "DnULnElement":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return DnULnElement._raw(self.n, out)

    def __sub__(self, other: "DnULnElement") -> "DnULnElement":
        return self + other.scale(-1)

    def scale(self, c) -> "DnULnElement":
        if not c:
            return DnULnElement(self.n)
        return DnULnElement._raw(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "DnULnElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return dnuln_mul(self, other)

    def commutator(self, other: "DnULnElement") -> "DnULnElement":
        return self * other - other * self

    def __str__(self) -> str:
        """Terms as ``weyl (x) [X][Y]``; either side is omitted when it is 1."""
        def mono(m, r, w):
            left = "*".join(x for x in (monomial_str(m, "t"), monomial_str(r, "d")) if x)
            right = word_str(w)
            return " (x) ".join(x for x in (left, right) if x)

        items = sorted(self.terms.items(), key=lambda kv: (
            len(kv[0][1]), [generator_key(g) for g in kv[0][1]], mi.order_key(kv[0][0][0] + kv[0][0][1])))
        return format_terms((mono(m, r, w), c) for ((m, r), w), c in items)

    def __repr__(self) -> str:
        return f"DnULnElement({self.n}, {self.terms})"


def dnuln_mul(A: DnULnElement, B: DnULnElement, memo: dict | None = None) -> DnULnElement:
    A._check(B)
    memo = {} if memo is None else memo
    out: dict = {}
    for ((a, b), w1), x in A.terms.items():
        for ((c, d), w2), y in B.terms.items():
            right = U_JET._nf(w1 + w2, True, memo) if (w1 and w2) else {w1 + w2: 1}
            xy = x * y
            for key, k in _mono_product(a, b, c, d):
                for w, e in right.items():
                    _acc(out, (key, w), xy * k * e)
    return DnULnElement._raw(A.n, out)
