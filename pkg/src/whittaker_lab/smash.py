"""The map phi : A_n # U(W_n) -> D_n (x) U(L_n) and its machine checks.

The smash product is never built as a quotient algebra.  It is presented by
its generators t^m and t^m d_k and three relation families:

* t^m t^r = t^(m+r)
* X f - f X = X(f)               (X a vector field, f a polynomial)
* X Y - Y X = [X, Y]             (Lie relation)

``verify_phi_homomorphism`` checks that phi respects all three on a finite
grid of generators; ``phi_truncation_rank`` checks injectivity on the
filtered piece spanned by t^r (t^m d_k) with |r| + |m| <= D.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable

from . import index as mi
from .index import MultiIndex
from .linalg import rank as matrix_rank
from .parallel import pmap
from .pbw import DnULnElement, dnuln_mul
from .poly import Poly
from .witt import WittElement, generator_bracket, generators


@dataclass(frozen=True)
class PolyGen:
    m: MultiIndex

    def __str__(self) -> str:
        return str(Poly.monomial(self.m))


@dataclass(frozen=True)
class FieldGen:
    m: MultiIndex
    k: int

    def __str__(self) -> str:
        return str(WittElement.gen(self.m, self.k))


SmashGenerator = PolyGen | FieldGen
Phi = Callable[[SmashGenerator], DnULnElement]


def phi_generator(g: SmashGenerator, binom: Callable = mi.binom_multi) -> DnULnElement:
    """Image of a generator; ``binom`` is injectable for mutation tests."""
    n = len(g.m)
    z = mi.zero(n)
    if isinstance(g, PolyGen):
        return DnULnElement._raw(n, {((g.m, z), ()): Fraction(1)})
    ek = mi.unit(n, g.k)
    terms = {((g.m, ek), ()): Fraction(1)}
    for r in mi.box(g.m):
        if any(r):
            c = binom(g.m, r)
            if c:
                terms[((mi.sub(g.m, r), z), ((r, g.k),))] = Fraction(c)
    return DnULnElement._raw(n, terms)


def _unit_binomial(m, r) -> int:
    return 1


# the mutation used to show the homomorphism check has teeth
phi_sabotaged = partial(phi_generator, binom=_unit_binomial)


def phi_poly(f: Poly, phi: Phi = phi_generator) -> DnULnElement:
    out = DnULnElement(f.n)
    for m, c in f.terms.items():
        out = out + phi(PolyGen(m)).scale(c)
    return out


def phi_witt(X: WittElement, phi: Phi = phi_generator) -> DnULnElement:
    out = DnULnElement(X.n)
    for (m, k), c in X.terms.items():
        out = out + phi(FieldGen(m, k)).scale(c)
    return out


@dataclass
class PhiReport:
    n: int
    deg: int
    passed: bool
    checks: dict[str, int] = field(default_factory=dict)
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "deg": self.deg,
            "coverage": "all generator pairs with max(|m|, |r|) <= deg",
            "passed": self.passed,
            "checks": self.checks,
            "counterexample": self.counterexample,
        }


def _check_family(args) -> tuple[int, dict | None]:
    family, n, D, phi = args
    polys = mi.up_to_degree(n, D)
    fields = generators(n, D)
    count = 0
    if family == "poly":
        for m in polys:
            pm = phi(PolyGen(m))
            for r in polys:
                count += 1
                lhs = dnuln_mul(pm, phi(PolyGen(r)))
                rhs = phi(PolyGen(mi.add(m, r)))
                if lhs != rhs:
                    return count, {"family": "poly", "left": str(PolyGen(m)), "right": str(PolyGen(r))}
    elif family == "smash":
        for m, k in fields:
            X = phi(FieldGen(m, k))
            for r in polys:
                count += 1
                f = phi(PolyGen(r))
                lhs = dnuln_mul(X, f) - dnuln_mul(f, X)
                rhs = DnULnElement(n)
                if r[k]:
                    s = mi.add(m, r)
                    s = s[:k] + (s[k] - 1,) + s[k + 1:]
                    rhs = phi(PolyGen(s)).scale(r[k])
                if lhs != rhs:
                    return count, {"family": "smash", "left": str(FieldGen(m, k)), "right": str(PolyGen(r))}
    else:
        images = [phi(FieldGen(m, k)) for m, k in fields]
        for a, x in enumerate(fields):
            for b in range(a + 1, len(fields)):
                y = fields[b]
                count += 1
                lhs = dnuln_mul(images[a], images[b]) - dnuln_mul(images[b], images[a])
                rhs = DnULnElement(n)
                for (m, k), c in generator_bracket(x, y).items():
                    rhs = rhs + phi(FieldGen(m, k)).scale(c)
                if lhs != rhs:
                    return count, {"family": "lie", "left": str(FieldGen(*x)), "right": str(FieldGen(*y))}
    return count, None


def verify_phi_homomorphism(n: int, D: int, phi: Phi = phi_generator) -> PhiReport:
    if n < 1 or D < 1:
        raise ValueError("need n >= 1 and D >= 1")
    families = ("poly", "smash", "lie")
    results = pmap(_check_family, [(f, n, D, phi) for f in families])
    report = PhiReport(n, D, True)
    for fam, (count, witness) in zip(families, results):
        report.checks[fam] = count
        if witness is not None and report.counterexample is None:
            report.passed = False
            report.counterexample = witness
    return report


@dataclass
class TruncationRank:
    rows: int
    cols: int
    rank: int

    @property
    def full(self) -> bool:
        return self.rank == self.cols

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "rank": self.rank, "full_rank": self.full}


def truncation_domain(n: int, D: int) -> list[tuple[MultiIndex, FieldGen | None]]:
    """Basis t^r and t^r (t^m d_k) of the filtered piece of A_n # U(W_n)."""
    dom: list[tuple[MultiIndex, FieldGen | None]] = [(r, None) for r in mi.up_to_degree(n, D)]
    for r in mi.up_to_degree(n, D):
        for m, k in generators(n, D - sum(r)):
            dom.append((r, FieldGen(m, k)))
    return dom


def phi_truncation_rank(n: int, D: int, phi: Phi = phi_generator) -> TruncationRank:
    if n < 1 or D < 0:
        raise ValueError("need n >= 1 and D >= 0")
    columns = []
    for r, g in truncation_domain(n, D):
        left = phi(PolyGen(r))
        columns.append(left if g is None else dnuln_mul(left, phi(g)))
    support = sorted({k for col in columns for k in col.terms}, key=repr)
    row_of = {k: i for i, k in enumerate(support)}
    # stored transposed: one row per domain element; rank is unchanged
    rows = []
    for col in columns:
        rows.append({row_of[k]: c for k, c in col.terms.items()})
    return TruncationRank(len(support), len(columns), matrix_rank(rows, len(support)))
