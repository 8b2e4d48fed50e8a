"""Text forms of rationals, types and algebra elements.

Elements are sums of terms like ``3/2*t1^2*d1`` or ``-t2*v1``: ``t<i>``
are the polynomial variables, ``d<i>`` the partials and ``v<j>`` the basis
vectors of a gl_n-module, all 1-based.  This is the same notation the
``__str__`` methods print, so printed elements parse back.  Every error
names the field it came from.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .glmod import GlModule
from .poly import Poly
from .weyl import WeylElement, WhittakerType
from .whittaker import TensorElement
from .witt import WittElement

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<sym>[tdv])(?P<idx>\d+)(?:\^(?P<pow>\d+))?"
                    r"|(?P<op>[+\-*]))")


class ParseError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def parse_rational(text, field: str = "value") -> Fraction:
    """``p`` or ``p/q`` with integers p, q; no floats."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    s = str(text).strip()
    if not _RATIONAL.fullmatch(s):
        raise ParseError(field, f"malformed rational {text!r} (expected p or p/q)")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError(field, f"zero denominator in {text!r}") from None


def parse_rationals(text, field: str = "value") -> tuple[Fraction, ...]:
    """Comma-separated rationals, or a list of them."""
    items = text.split(",") if isinstance(text, str) else list(text)
    if not items or (len(items) == 1 and not str(items[0]).strip()):
        raise ParseError(field, "empty list")
    return tuple(parse_rational(x, f"{field}[{k + 1}]") for k, x in enumerate(items))


def parse_type(text, field: str = "a") -> WhittakerType:
    return WhittakerType(parse_rationals(text, field))


def parse_grid(text, field: str = "grid") -> tuple[int, int]:
    """``lo:hi`` (inclusive integer range)."""
    m = re.fullmatch(r"\s*([+-]?\d+)\s*:\s*([+-]?\d+)\s*", str(text))
    if not m:
        raise ParseError(field, f"expected lo:hi, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise ParseError(field, f"empty range {text!r}")
    return lo, hi


Term = tuple[Fraction, tuple[int, ...], tuple[int, ...], "int | None"]


def parse_terms(text: str, n: int, field: str = "element") -> list[Term]:
    """Split into (coeff, t-exponent, d-exponent, vector index or None)."""
    pos, s = 0, str(text)
    tokens = []
    while pos < len(s):
        if s[pos:].strip() == "":
            break
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(field, f"unexpected character {s[pos:].strip()[:1]!r} at offset {pos}")
        tokens.append(m)
        pos = m.end()
    if not tokens:
        raise ParseError(field, "empty expression")

    terms: list[Term] = []
    k = 0
    while k < len(tokens):
        sign = 1
        op = tokens[k].group("op")
        if op in ("+", "-"):
            sign = -1 if op == "-" else 1
            k += 1
        elif terms:
            raise ParseError(field, "missing + or - between terms")
        coeff = Fraction(sign)
        t = [0] * n
        d = [0] * n
        vec = None
        expect_factor = True
        while k < len(tokens) and expect_factor:
            tok = tokens[k]
            if tok.group("num"):
                try:
                    coeff *= Fraction(tok.group("num"))
                except ZeroDivisionError:
                    raise ParseError(field, f"zero denominator in {tok.group('num')!r}") from None
            elif tok.group("sym"):
                sym, i = tok.group("sym"), int(tok.group("idx"))
                e = int(tok.group("pow") or 1)
                if sym == "v":
                    if vec is not None or tok.group("pow"):
                        raise ParseError(field, "each term takes at most one plain v<j>")
                    vec = i - 1
                else:
                    if not 1 <= i <= n:
                        raise ParseError(field, f"{sym}{i} out of range for n={n}")
                    if sym == "d" and vec is not None:
                        raise ParseError(field, "partials must precede the vector")
                    if sym == "t" and any(d):
                        raise ParseError(field, "write t-factors before d-factors (normal order)")
                    (t if sym == "t" else d)[i - 1] += e
            else:
                raise ParseError(field, f"operator {tok.group('op')!r} where a factor was expected")
            k += 1
            if k < len(tokens) and tokens[k].group("op") == "*":
                k += 1
                if k >= len(tokens):
                    raise ParseError(field, "dangling *")
            else:
                expect_factor = False
        if expect_factor:
            raise ParseError(field, "term without factors")
        terms.append((coeff, tuple(t), tuple(d), vec))
    return terms


def parse_poly(text: str, n: int, field: str = "poly") -> Poly:
    out: dict = {}
    for c, t, d, v in parse_terms(text, n, field):
        if any(d) or v is not None:
            raise ParseError(field, "a polynomial takes only t-factors")
        out[t] = out.get(t, 0) + c
    return Poly(n, out)


def parse_weyl(text: str, n: int, field: str = "weyl") -> WeylElement:
    out: dict = {}
    for c, t, d, v in parse_terms(text, n, field):
        if v is not None:
            raise ParseError(field, "a Weyl element takes no vector factor")
        out[(t, d)] = out.get((t, d), 0) + c
    return WeylElement(n, out)


def parse_witt(text: str, n: int, field: str = "witt") -> WittElement:
    out: dict = {}
    for c, t, d, v in parse_terms(text, n, field):
        if v is not None or sum(d) != 1:
            raise ParseError(field, "each vector-field term needs exactly one d<i>")
        key = (t, d.index(1))
        out[key] = out.get(key, 0) + c
    return WittElement(n, out)


def parse_tensor(text: str, V: GlModule, field: str = "element") -> TensorElement:
    out: dict = {}
    for c, t, d, v in parse_terms(text, V.n, field):
        if any(d):
            raise ParseError(field, "tensor elements take no d-factors")
        if v is None:
            if V.dim != 1:
                raise ParseError(field, "missing v<j> factor")
            v = 0
        if not 0 <= v < V.dim:
            raise ParseError(field, f"v{v + 1} out of range for a module of dimension {V.dim}")
        out[(t, v)] = out.get((t, v), 0) + c
    return TensorElement(V, out)
