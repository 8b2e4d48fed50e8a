"""Tensor modules T(A_n^a, V) and their Whittaker structure.

For a gl_n-module V (an L_n-module through the jet projection) the vector
field t^m d_k acts on p (x) v by

    (t^m (d_k + a_k) p) (x) v  +  sum_i m_i t^(m - e_i) p (x) E_ik v

and polynomials act on the left factor.  Elements are stored as flat maps
``(monomial, basis index) -> coeff``.

With a nonsingular type, {h^m (1 (x) v_j)} is a basis (the free U(h_n)
structure); ``TensorModule.decompose`` computes coordinates in it by
repeatedly peeling off the top term in the degree-then-lex order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Mapping, Sequence

from . import index as mi
from .glmod import GlModule, module_from_spec
from .index import DimensionError, MultiIndex
from .linalg import Matrix, Subspace, kernel_basis
from .poly import Poly, format_terms, monomial_str
from .weyl import as_type, require_nonsingular
from .witt import Generator, WittElement, generator_bracket, generators

Key = tuple[MultiIndex, int]


class TruncationError(ValueError):
    """An element or operator does not fit the requested degree truncation."""


class ContractError(RuntimeError):
    """An invariant that must hold for nonsingular types failed."""


def _q(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _acc(out: dict, key, value) -> None:
    v = out.get(key, 0) + value
    if v:
        out[key] = v
    else:
        out.pop(key, None)


class TensorElement:
    __slots__ = ("V", "terms")

    def __init__(self, V: GlModule, terms: Mapping[Key, object] | None = None):
        self.V = V
        self.terms: dict[Key, Fraction] = {}
        for (m, j), c in (terms or {}).items():
            m = tuple(m)
            if len(m) != V.n or not 0 <= j < V.dim:
                raise DimensionError(f"bad tensor key {(m, j)}")
            if c:
                _acc(self.terms, (m, j), Fraction(c))

    @classmethod
    def _raw(cls, V: GlModule, terms: dict) -> "TensorElement":
        x = cls.__new__(cls)
        x.V = V
        x.terms = terms
        return x

    @classmethod
    def pure(cls, V: GlModule, p: Poly, v: Sequence) -> "TensorElement":
        """p (x) v."""
        out: dict = {}
        for m, c in p.terms.items():
            for j, x in enumerate(v):
                if x:
                    _acc(out, (m, j), c * x)
        return cls._raw(V, out)

    @classmethod
    def basis_element(cls, V: GlModule, m: MultiIndex, j: int, c=1) -> "TensorElement":
        return cls(V, {(tuple(m), j): c})

    @property
    def n(self) -> int:
        return self.V.n

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return TensorElement._raw(self.V, out)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, -c)
        return TensorElement._raw(self.V, out)

    def __neg__(self) -> "TensorElement":
        return self.scale(-1)

    def scale(self, c) -> "TensorElement":
        if not c:
            return TensorElement._raw(self.V, {})
        return TensorElement._raw(self.V, {k: v * c for k, v in self.terms.items()})

    __rmul__ = scale

    def degree(self) -> int:
        """Largest total t-degree (-1 for zero)."""
        return max((sum(m) for m, _ in self.terms), default=-1)

    def by_monomial(self) -> dict[MultiIndex, list[Fraction]]:
        """The same element as a map monomial -> vector in V."""
        out: dict[MultiIndex, list[Fraction]] = {}
        for (m, j), c in self.terms.items():
            out.setdefault(m, [Fraction(0)] * self.V.dim)[j] = c
        return dict(sorted(out.items(), key=lambda kv: mi.order_key(kv[0])))

    def constant_vector(self) -> list[Fraction]:
        """The vector v when the element is 1 (x) v."""
        if any(any(m) for m, _ in self.terms):
            raise ValueError("element is not of the form 1 (x) v")
        v = [Fraction(0)] * self.V.dim
        for (_, j), c in self.terms.items():
            v[j] = c
        return v

    def __str__(self) -> str:
        def mono(m, j):
            return "*".join(x for x in (monomial_str(m), f"v{j + 1}") if x)

        items = sorted(self.terms.items(), key=lambda kv: (mi.order_key(kv[0][0]), kv[0][1]))
        return format_terms((mono(m, j), c) for (m, j), c in items)

    def __repr__(self) -> str:
        return f"TensorElement({self})"


HBasisCoefficients = dict  # (m, j) -> Fraction, meaning sum c h^m (1 (x) v_j)


@dataclass
class Annihilation:
    m: int | None
    m_max: int
    monotone: bool | None
    vanishing: dict[int, bool] = field(default_factory=dict)
    operators_checked: int = 0

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "m_max": self.m_max,
            "found": self.m is not None,
            "monotone": self.monotone,
            "vanishing": {str(k): v for k, v in sorted(self.vanishing.items())},
            "operators_checked": self.operators_checked,
        }


class TensorModule:
    """T(A_n^a, V) together with cached action data.

    ``mutation`` deliberately breaks the gl_n correction term so tests can
    show the representation check has teeth:

    * ``"drop"``: omit the sum entirely.  This is still a module (V is then
      just a trivial L_n-module), so the check is expected to pass.
    * ``"transpose"``: use E_ki in place of E_ik.
    * ``"unit-weight"``: use 1 in place of the factor m_i.
    """

    MUTATIONS = (None, "drop", "transpose", "unit-weight")

    def __init__(self, a, V: GlModule | str | dict, mutation: str | None = None):
        self.a = as_type(a)
        self.n = self.a.n
        self.V = module_from_spec(self.n, V)
        if self.V.n != self.n:
            raise DimensionError(f"module is for gl_{self.V.n}, type has n={self.n}")
        self.dim = self.V.dim
        if mutation not in self.MUTATIONS:
            raise ValueError(f"unknown mutation {mutation!r}")
        self.mutation = mutation
        # integral scalars stay ints: much faster than Fraction and compare equal
        self._a = [_q(x) for x in self.a.a]
        self._gen_cache: dict = {}
        self._h_cache: dict = {}
        self._k_cache: dict[MultiIndex, Fraction] = {}

    # -- elements ----------------------------------------------------------
    def element(self, terms: Mapping[Key, object] | None = None) -> TensorElement:
        return TensorElement(self.V, terms)

    def zero(self) -> TensorElement:
        return TensorElement._raw(self.V, {})

    def whittaker_basis_vector(self, j: int) -> TensorElement:
        """1 (x) v_j."""
        return TensorElement._raw(self.V, {(mi.zero(self.n), j): 1})

    def basis(self, D: int) -> list[Key]:
        """Monomial basis t^r (x) v_j, |r| <= D, in canonical order."""
        return [(r, j) for r in mi.up_to_degree(self.n, D) for j in range(self.dim)]

    def coords(self, w: TensorElement, D: int, position: dict | None = None) -> dict[int, Fraction]:
        """Sparse coordinates in ``basis(D)``; never clips."""
        pos = position or {k: i for i, k in enumerate(self.basis(D))}
        out = {}
        for k, c in w.terms.items():
            idx = pos.get(k)
            if idx is None:
                raise TruncationError(f"term {k} lies outside the degree-{D} truncation")
            out[idx] = c
        return out

    def from_coords(self, vec, D: int) -> TensorElement:
        basis = self.basis(D)
        items = vec.items() if isinstance(vec, dict) else enumerate(vec)
        return TensorElement._raw(self.V, {basis[i]: Fraction(c) for i, c in items if c})

    # -- actions -----------------------------------------------------------
    def _gen_on_basis(self, m: MultiIndex, k: int, r: MultiIndex, b: int) -> tuple:
        key = (m, k, r, b)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        s = mi.add(m, r)
        ak = self._a[k]
        if r[k]:
            _acc(out, (s[:k] + (s[k] - 1,) + s[k + 1:], b), r[k])
        if ak:
            _acc(out, (s, b), ak)
        if self.mutation != "drop":
            for i in range(self.n):
                if m[i]:
                    t = s[:i] + (s[i] - 1,) + s[i + 1:]
                    weight = 1 if self.mutation == "unit-weight" else m[i]
                    col = self.V.column(k, i, b) if self.mutation == "transpose" else self.V.column(i, k, b)
                    for row, x in col.items():
                        _acc(out, (t, row), weight * _q(x))
        res = tuple(out.items())
        self._gen_cache[key] = res
        return res

    def act_generator(self, g: Generator, w: TensorElement) -> TensorElement:
        m, k = g
        out: dict = {}
        for (r, b), c in w.terms.items():
            for key, x in self._gen_on_basis(m, k, r, b):
                _acc(out, key, c * x)
        return TensorElement._raw(self.V, out)

    def act(self, X: WittElement, w: TensorElement) -> TensorElement:
        if X.n != self.n or w.V.n != self.n:
            raise DimensionError("dimension mismatch")
        out: dict = {}
        for (m, k), c in X.terms.items():
            for (r, b), d in w.terms.items():
                cd = c * d
                for key, x in self._gen_on_basis(m, k, r, b):
                    _acc(out, key, cd * x)
        return TensorElement._raw(self.V, out)

    def poly_act(self, f: Poly, w: TensorElement) -> TensorElement:
        if f.n != self.n:
            raise DimensionError("dimension mismatch")
        out: dict = {}
        for s, c in f.terms.items():
            for (r, b), d in w.terms.items():
                _acc(out, (mi.add(s, r), b), c * d)
        return TensorElement._raw(self.V, out)

    def shifted_partial(self, i: int, w: TensorElement) -> TensorElement:
        """(d_i - a_i) w, computed through the W_n action."""
        return self.act_generator((mi.zero(self.n), i), w) - w.scale(self._a[i])

    def partial_op(self, m: MultiIndex, w: TensorElement) -> TensorElement:
        """d_m w = prod_i (d_i - a_i)^(m_i) w."""
        for i, e in enumerate(m):
            for _ in range(e):
                if not w:
                    return w
                w = self.shifted_partial(i, w)
        return w

    def h_power(self, m: MultiIndex, w: TensorElement) -> TensorElement:
        """h^m w with h_i = t_i d_i."""
        for i, e in enumerate(m):
            for _ in range(e):
                w = self.act_generator((mi.unit(self.n, i), i), w)
        return w

    def h_basis_element(self, m: MultiIndex, j: int) -> TensorElement:
        """h^m (1 (x) v_j), cached."""
        key = (m, j)
        hit = self._h_cache.get(key)
        if hit is None:
            if any(m):
                i = next(i for i, e in enumerate(m) if e)
                lower = m[:i] + (m[i] - 1,) + m[i + 1:]
                hit = self.act_generator((mi.unit(self.n, i), i), self.h_basis_element(lower, j))
            else:
                hit = self.whittaker_basis_vector(j)
            self._h_cache[key] = hit
        return hit

    # -- matrices ----------------------------------------------------------
    def operator_matrix(self, op: Callable[[TensorElement], TensorElement],
                        D: int, D_out: int | None = None) -> Matrix:
        """Matrix of ``op`` from basis(D) into basis(D_out) (rows = codomain)."""
        return matrix_between(self, self, op, D, D if D_out is None else D_out)

    def whittaker_vectors(self, D: int) -> Subspace:
        """Common kernel of all d_i - a_i on the degree-<=D truncation."""
        rows: list = []
        for i in range(self.n):
            rows.extend(self.operator_matrix(lambda w, i=i: self.shifted_partial(i, w), D))
        return kernel_basis(rows, len(self.basis(D)))

    def free_basis_matrix(self, D: int, allow_singular: bool = False) -> Matrix:
        """Columns h^m (1 (x) v_j), |m| <= D, in the monomial basis of degree <= D."""
        if not allow_singular:
            require_nonsingular(self.a)
        cols = self.basis(D)
        pos = {k: i for i, k in enumerate(cols)}
        M = [[Fraction(0)] * len(cols) for _ in range(len(cols))]
        for c, (m, j) in enumerate(cols):
            for row, x in self.coords(self.h_basis_element(m, j), D, pos).items():
                M[row][c] = x
        return M

    # -- free basis decomposition -----------------------------------------
    def k_scalar(self, m: MultiIndex) -> Fraction:
        """The nonzero k_m with d_m h^m u = k_m u for every Whittaker u."""
        require_nonsingular(self.a)
        m = tuple(m)
        hit = self._k_cache.get(m)
        if hit is not None:
            return hit
        k = None
        for j in range(self.dim):
            image = self.partial_op(m, self.h_basis_element(m, j))
            expected_support = {(mi.zero(self.n), j)}
            if set(image.terms) - expected_support:
                raise ContractError(f"d_m h^m (1 (x) v_{j + 1}) is not a multiple of 1 (x) v_{j + 1}")
            kj = image.terms.get((mi.zero(self.n), j), Fraction(0))
            if k is None:
                k = kj
            elif kj != k:
                raise ContractError(f"k_m depends on the Whittaker vector at m={m}")
        if not k:
            raise ContractError(f"k_m vanishes at m={m}")
        self._k_cache[m] = k
        return k

    def degree_of(self, w: TensorElement) -> MultiIndex:
        """Largest m in the total order with d_m w != 0."""
        require_nonsingular(self.a)
        if not w:
            raise ValueError("degree of the zero element is undefined")
        for s in reversed(mi.up_to_degree(self.n, w.degree())):
            if self.partial_op(s, w):
                return s
        raise ContractError("no d_s survives on a nonzero element")  # pragma: no cover

    def decompose(self, w: TensorElement) -> HBasisCoefficients:
        require_nonsingular(self.a)
        coeffs: dict[Key, Fraction] = {}
        while w:
            m = self.degree_of(w)
            u = self.partial_op(m, w).constant_vector()
            k = self.k_scalar(m)
            for j, x in enumerate(u):
                if x:
                    c = Fraction(x) / k
                    _acc(coeffs, (m, j), c)
                    w = w - self.h_basis_element(m, j).scale(c)
        return dict(sorted(coeffs.items(), key=lambda kv: (mi.order_key(kv[0][0]), kv[0][1])))

    def reassemble(self, coeffs: Mapping[Key, object]) -> TensorElement:
        out = self.zero()
        for (m, j), c in coeffs.items():
            out = out + self.h_basis_element(tuple(m), j).scale(Fraction(c))
        return out

    # -- omega operators ---------------------------------------------------
    def omega(self, alpha: MultiIndex, beta: MultiIndex, m: int, j: int, l: int, p: int,
              w: TensorElement) -> TensorElement:
        """sum_i (-1)^i C(m,i) t^(alpha+(m-i)e_j) d_l . t^(beta+i e_j) d_p . w"""
        out: dict = {}
        ej = mi.unit(self.n, j)
        for i in range(m + 1):
            x = (mi.add(alpha, tuple((m - i) * e for e in ej)), l)
            y = (mi.add(beta, tuple(i * e for e in ej)), p)
            c = (-1) ** i * comb(m, i)
            for key, v in self.act_generator(x, self.act_generator(y, w)).terms.items():
                _acc(out, key, c * v)
        return TensorElement._raw(self.V, out)

    def omega_matrix(self, alpha, beta, m: int, j: int, l: int, p: int, D: int) -> Matrix:
        """Matrix on basis(D) into basis(D + |alpha| + |beta| + m)."""
        D_out = D + sum(alpha) + sum(beta) + m
        return self.operator_matrix(lambda w: self.omega(alpha, beta, m, j, l, p, w), D, D_out)

    def omega_vanishes(self, m: int, D: int, first_only: bool = True) -> tuple[bool, int]:
        """Whether every omega with |alpha|, |beta| <= D kills the degree-<=D truncation."""
        count = 0
        idx = mi.up_to_degree(self.n, D)
        basis = [TensorElement._raw(self.V, {k: 1}) for k in self.basis(D)]
        ok = True
        for alpha in idx:
            for beta in idx:
                for j in range(self.n):
                    for l in range(self.n):
                        for p in range(self.n):
                            count += 1
                            if any(self.omega(alpha, beta, m, j, l, p, b) for b in basis):
                                ok = False
                                if first_only:
                                    return ok, count
        return ok, count


def matrix_between(dom: TensorModule, cod: TensorModule,
                   op: Callable[[TensorElement], TensorElement], D: int, D_out: int) -> Matrix:
    """Matrix of a linear map between truncations, rows indexed by cod.basis(D_out).

    Raises TruncationError when an image leaves the codomain truncation.
    """
    basis = dom.basis(D)
    pos = {k: i for i, k in enumerate(cod.basis(D_out))}
    M = [[Fraction(0)] * len(basis) for _ in range(len(pos))]
    for col, key in enumerate(basis):
        image = op(TensorElement._raw(dom.V, {key: 1}))
        for row, c in cod.coords(image, D_out, pos).items():
            M[row][col] = c
    return M


def tensor_module(a, V) -> TensorModule:
    return TensorModule(a, V)


def w_act(a, X: WittElement, w: TensorElement) -> TensorElement:
    return TensorModule(a, w.V).act(X, w)


def a_act(f: Poly, w: TensorElement) -> TensorElement:
    out: dict = {}
    for s, c in f.terms.items():
        for (r, b), d in w.terms.items():
            _acc(out, (mi.add(s, r), b), c * d)
    return TensorElement._raw(w.V, out)


# -- representation check ----------------------------------------------------

@dataclass
class RepresentationReport:
    passed: bool
    checks: dict[str, int]
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": self.checks, "counterexample": self.counterexample}


def verify_representation(a, V, D: int, mutation: str | None = None) -> RepresentationReport:
    """Bracket law, smash relation and A_n-associativity on t^r (x) v_j, |r| <= D."""
    T = TensorModule(a, V, mutation=mutation)
    n = T.n
    gens = generators(n, D)
    monos = mi.up_to_degree(n, D)
    basis = [TensorElement._raw(T.V, {k: 1}) for k in T.basis(D)]
    checks = {"lie": 0, "smash": 0, "assoc": 0}

    def fail(family, left, right, b):
        return RepresentationReport(False, checks, {
            "family": family, "left": left, "right": right, "vector": str(b)})

    images = {g: [T.act_generator(g, b) for b in basis] for g in gens}
    for ia, x in enumerate(gens):
        for y in gens[ia + 1:]:
            br = generator_bracket(x, y)
            for bi, b in enumerate(basis):
                checks["lie"] += 1
                lhs = T.zero()
                for g, c in br.items():
                    lhs = lhs + T.act_generator(g, b).scale(c)
                rhs = T.act_generator(x, images[y][bi]) - T.act_generator(y, images[x][bi])
                if lhs != rhs:
                    return fail("lie", str(WittElement.gen(*x)), str(WittElement.gen(*y)), b)
    for x in gens:
        X = WittElement.gen(*x)
        for s in monos:
            f = Poly.monomial(s)
            Xf = X.act(f)
            for bi, b in enumerate(basis):
                checks["smash"] += 1
                lhs = T.act_generator(x, T.poly_act(f, b)) - T.poly_act(f, images[x][bi])
                if lhs != T.poly_act(Xf, b):
                    return fail("smash", str(X), str(f), b)
    for s in monos:
        for u in monos:
            for b in basis:
                checks["assoc"] += 1
                fs, fu = Poly.monomial(s), Poly.monomial(u)
                if T.poly_act(fs * fu, b) != T.poly_act(fs, T.poly_act(fu, b)):
                    return fail("assoc", str(fs), str(fu), b)
    return RepresentationReport(True, checks)


def whittaker_vectors(a, V, D: int) -> Subspace:
    return TensorModule(a, V).whittaker_vectors(D)


def whittaker_decompose(a, V, w: TensorElement) -> HBasisCoefficients:
    return TensorModule(a, V).decompose(w)


def free_basis_matrix(a, V, D: int) -> Matrix:
    return TensorModule(a, V).free_basis_matrix(D)


def omega_op(a, V, alpha, beta, m: int, j: int, l: int, p: int, D: int) -> Matrix:
    return TensorModule(a, V).omega_matrix(tuple(alpha), tuple(beta), m, j, l, p, D)


def find_annihilating_m(a, V, D: int, m_max: int = 8) -> Annihilation:
    """Smallest m <= m_max whose omega operators all kill the degree-<=D truncation.

    After a hit, m + 1 is checked as well (``monotone``).
    """
    T = TensorModule(a, V)
    result = Annihilation(None, m_max, None)
    for m in range(m_max + 1):
        ok, count = T.omega_vanishes(m, D, first_only=True)
        result.vanishing[m] = ok
        result.operators_checked += count
        if ok:
            result.m = m
            ok_next, count = T.omega_vanishes(m + 1, D, first_only=True)
            result.vanishing[m + 1] = ok_next
            result.operators_checked += count
            result.monotone = ok_next
            break
    return result
