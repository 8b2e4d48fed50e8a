"""The acceptance suite: nine exact, property-based criteria.

Each criterion is a function returning a ``CriterionResult``; ``run_all``
runs them in order.  Shared by ``whittaker-lab all`` and the test suite.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

from . import index as mi
from .derham import cyclicity_probe, image_submodule, singular_defect, verify_complex
from .glmod import make_exterior
from .linalg import rank
from .pbw import U_JET
from .smash import phi_truncation_rank, verify_phi_homomorphism
from .weighting import uniform_bound_check, verify_weight_representation, weight_grid
from .whittaker import TensorElement, TensorModule, find_annihilating_m, verify_representation
from .witt import WittElement, as_weyl, generator_bracket, generators


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "details": self.details}

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.title}"


def _ones(n: int) -> tuple[int, ...]:
    return (1,) * n


def _ramp(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def _singular(n: int) -> tuple[int, ...]:
    return (0,) + tuple(range(1, n))


def _modules(n: int) -> list[str]:
    # trivial and natural are exterior:0 and exterior:1
    return ["trivial", "natural"] + [f"exterior:{k}" for k in range(2, n + 1)]


def _fail(details: dict, key: str, info) -> None:
    details.setdefault(key, []).append(info)


def criterion_1() -> CriterionResult:
    details: dict = {"grid": []}
    ok = True
    for n in (1, 2, 3):
        for D in (1, 2, 3):
            hom = verify_phi_homomorphism(n, D)
            tr = phi_truncation_rank(n, D)
            ok = ok and hom.passed and tr.full
            details["grid"].append({"n": n, "deg": D, "homomorphism": hom.passed,
                                    "rank": tr.rank, "rows": tr.rows, "cols": tr.cols,
                                    "full": tr.full})
    return CriterionResult(1, "isomorphism suite (phi homomorphism, full truncation rank)", ok, details)


def criterion_2() -> CriterionResult:
    details: dict = {"cases": 0}
    ok = True
    for n in (1, 2, 3):
        for a in (_ones(n), _ramp(n), _singular(n)):
            for V in _modules(n):
                # D = 3 contains every check made at smaller D
                rep = verify_representation(a, V, 3)
                details["cases"] += 1
                if not rep.passed:
                    ok = False
                    _fail(details, "failures", {"n": n, "a": [str(x) for x in a], "module": V,
                                                "counterexample": rep.counterexample})
    return CriterionResult(2, "representation suite (bracket, smash relation, associativity)", ok, details)


def criterion_3() -> CriterionResult:
    details: dict = {"dims": []}
    ok = True
    D = 6
    for n in (1, 2, 3, 4):
        for k in range(n + 1):
            for a in (_ramp(n), (0,) * n, _singular(n)):
                d = TensorModule(a, make_exterior(n, k)).whittaker_vectors(D).dim
                ok = ok and d == comb(n, k)
                details["dims"].append({"n": n, "k": k, "a": [str(x) for x in a], "dim": d,
                                        "expected": comb(n, k)})
    return CriterionResult(3, "Whittaker dimension law dim Wh = C(n,k)", ok, details)


def random_element(T: TensorModule, rng: random.Random, D: int, density: float = 0.4) -> TensorElement:
    """Seeded random nonzero element of degree <= D with small rational coefficients."""
    basis = T.basis(D)
    while True:
        terms = {}
        for key in basis:
            if rng.random() < density:
                terms[key] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        w = TensorElement(T.V, terms)
        if w:
            return w


def criterion_4(samples: int = 100, seed: int = 2024) -> CriterionResult:
    details: dict = {"free_basis": 0, "round_trips": 0, "k_tables": 0}
    ok = True
    modules: list[TensorModule] = []
    for n in (1, 2, 3):
        for a in (_ones(n), _ramp(n), tuple(Fraction(1, i + 2) - i for i in range(n))):
            for V in _modules(n):
                T = TensorModule(a, V)
                modules.append(T)
                for D in range(6):
                    M = T.free_basis_matrix(D)
                    details["free_basis"] += 1
                    if rank(M) != len(M):
                        ok = False
                        _fail(details, "singular", {"n": n, "module": V, "deg": D})
                # k_m: nonzero and v-independent (k_scalar raises otherwise)
                for m in mi.up_to_degree(n, 5):
                    if not T.k_scalar(m):
                        ok = False
                details["k_tables"] += 1
    rng = random.Random(seed)
    for s in range(samples):
        T = modules[s % len(modules)]
        w = random_element(T, rng, rng.randint(0, 4))
        if T.reassemble(T.decompose(w)) != w:
            ok = False
            _fail(details, "round_trip_failures", {"sample": s, "element": str(w)})
        details["round_trips"] += 1
    details["seed"] = seed
    return CriterionResult(4, "free U(h_n) basis, decomposition round trip, k_m table", ok, details)


def criterion_5() -> CriterionResult:
    details: dict = {"exactness": 0, "singular": []}
    ok = True
    for n in (1, 2, 3):
        for a in (_ones(n), _ramp(n), tuple(Fraction((-1) ** i * (i + 1), 2) for i in range(n))):
            for D in range(6):
                rep = verify_complex(a, n, D)
                details["exactness"] += 1
                if not (rep.d2_zero and rep.exact and rep.euler_characteristic == 0):
                    ok = False
                    _fail(details, "failures", rep.to_json())
        for D in range(6):
            defects = singular_defect(n, D)
            ok = ok and defects[0] == 1
            details["singular"].append({"n": n, "deg": D, "defects": defects})
    return CriterionResult(5, "de Rham complex exact for nonsingular a, defect 1 at a = 0", ok, details)


def criterion_6(trials: int = 10, seed: int = 0) -> CriterionResult:
    details: dict = {"whittaker": [], "probes": []}
    ok = True
    for n in (1, 2, 3):
        for a in (_ones(n), _ramp(n)):
            for k in range(1, n + 1):
                d = image_submodule(a, n, k, 3).whittaker_dim()
                ok = ok and d == comb(n - 1, k - 1)
                details["whittaker"].append({"n": n, "k": k, "a": [str(x) for x in a], "dim": d,
                                             "expected": comb(n - 1, k - 1)})
    for n in (1, 2):
        for k in range(1, n + 1):
            for D in range(5):
                rep = cyclicity_probe(image_submodule(_ramp(n), n, k, D), trials, seed)
                ok = ok and rep.passed
                details["probes"].append({"n": n, "k": k, "deg": D, "passes": rep.passes,
                                          "trials": trials})
    details["seed"] = seed
    return CriterionResult(6, "simplicity evidence for the images (Whittaker dims, cyclicity)", ok, details)


def criterion_7() -> CriterionResult:
    details: dict = {"searches": []}
    ok = True
    for n in (1, 2):
        for a in (_ones(n), _ramp(n)):
            for V in ("trivial", "natural"):
                for D in range(4):
                    res = find_annihilating_m(a, V, D, m_max=8)
                    ok = ok and res.m is not None and bool(res.monotone)
                    details["searches"].append({"n": n, "a": [str(x) for x in a], "module": V,
                                                "deg": D, "m": res.m, "monotone": res.monotone})
    return CriterionResult(7, "omega annihilation: some m <= 8, monotone", ok, details)


def criterion_8() -> CriterionResult:
    details: dict = {"cases": []}
    ok = True
    cases = [((1,), "trivial", 5, weight_grid(1, -2, 2)),
             ((2,), "natural", 5, weight_grid(1, -2, 2)),
             ((1, 2), "exterior:1", 3, weight_grid(2, -1, 1)),
             ((1, 1), "trivial", 3, weight_grid(2, -1, 1)),
             ((1, 1), "exterior:2", 3, weight_grid(2, -1, 1))]
    for a, V, D, grid in cases:
        rep = verify_weight_representation(a, V, D, grid)
        bound = uniform_bound_check(a, V, D, grid)
        ok = ok and rep.passed and bound.passed
        details["cases"].append({"a": [str(x) for x in a], "module": V, "deg": D,
                                 "grid_size": len(grid), "representation": rep.passed,
                                 "checks": rep.checks, "uniform_bound": bound.passed,
                                 "bound": bound.bound})
    return CriterionResult(8, "weighting functor (eigenvalues, brackets, uniform bound)", ok, details)


def criterion_9(words: int = 60, seed: int = 7) -> CriterionResult:
    details: dict = {"witt_vs_weyl": 0, "confluence": 0, "jacobi": 0}
    ok = True
    for n in (1, 2, 3):
        gens = generators(n, 4)
        weyl = {g: as_weyl(WittElement.gen(*g)) for g in gens}
        for ia, x in enumerate(gens):
            for y in gens[ia:]:
                details["witt_vs_weyl"] += 1
                br = WittElement(n, generator_bracket(x, y))
                if as_weyl(br) != weyl[x].commutator(weyl[y]):
                    ok = False
                    _fail(details, "bracket_failures", [str(WittElement.gen(*x)),
                                                        str(WittElement.gen(*y))])
    rng = random.Random(seed)
    for n in (1, 2):
        pool = generators(n, 3, min_deg=1)
        for _ in range(words):
            word = [rng.choice(pool) for _ in range(rng.randint(2, 4))]
            details["confluence"] += 1
            if U_JET.normalize(word, "leftmost") != U_JET.normalize(word, "rightmost"):
                ok = False
                _fail(details, "confluence_failures", [str(WittElement.gen(*g)) for g in word])
    for n, deg in ((1, 3), (2, 2), (3, 1)):
        basis = [WittElement.gen(*g) for g in generators(n, deg)]
        for x in basis:
            for y in basis:
                xy = x.bracket(y)
                for z in basis:
                    details["jacobi"] += 1
                    if xy.bracket(z) + y.bracket(z).bracket(x) + z.bracket(x).bracket(y):
                        ok = False
                        _fail(details, "jacobi_failures", [str(x), str(y), str(z)])
    details["seed"] = seed
    return CriterionResult(9, "kernel oracles (Witt vs Weyl, PBW confluence, Jacobi)", ok, details)


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_criterion(number: int) -> CriterionResult:
    start = time.perf_counter()
    res = CRITERIA[number]()
    res.seconds = time.perf_counter() - start
    return res


def run_all(numbers=None, echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    out = []
    for k in numbers or sorted(CRITERIA):
        res = run_criterion(k)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
