"""Command-line driver: one verification task per invocation, one JSON report.

    whittaker-lab complex --n 2 --a 1,1 --deg 4 --out complex.json

Settings may come from a YAML or JSON file (``--config``); flags override
the file.  Reports hold rationals as strings and no floats; wall-clock data
lives in a separate ``timing`` section so the rest is byte-reproducible.
Exit status is 0 when every check passes, 1 when a check fails and 2 for
invalid input.
"""
from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import yaml

from . import __version__
from . import index as mi
from .glmod import GlModule, module_from_spec, module_to_spec
from .linalg import rank
from .weyl import SingularTypeError, WhittakerType
from .whittaker import TensorModule, TruncationError, find_annihilating_m
from .textio import (ParseError, parse_grid, parse_rationals, parse_tensor, parse_terms,
                     parse_witt)

TASKS = ("bracket", "phi", "verify-iso", "whittaker", "decompose", "omega", "complex",
         "weighting", "all")
NEEDS_NONSINGULAR = ("decompose", "omega", "weighting")
_COMMON = ("n", "a", "module", "deg")
TASK_FIELDS = {
    "bracket": ("n", "deg", "x", "y"),
    "phi": ("n", "deg", "gen"),
    "verify-iso": ("n", "deg"),
    "whittaker": _COMMON + ("trials", "seed"),
    "decompose": _COMMON + ("element",),
    "omega": _COMMON + ("m_max",),
    "complex": _COMMON + ("trials", "seed"),
    "weighting": _COMMON + ("grid", "max_deg"),
    "all": ("criteria",),
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    task: str
    n: int | None = None
    a: tuple[Fraction, ...] | None = None
    module: Any = "trivial"
    deg: int = 2
    grid: tuple[int, int] = (-1, 1)
    trials: int = 10
    seed: int = 0
    m_max: int = 8
    x: str | None = None
    y: str | None = None
    gen: str | None = None
    element: str | None = None
    max_deg: int | None = None
    criteria: tuple[int, ...] | None = None
    out: str | None = None

    def echo(self) -> dict:
        """Canonical, JSON-ready view (the output path is not part of it)."""
        d = {"task": self.task}
        d.update((k, v) for k, v in asdict(self).items() if k in TASK_FIELDS[self.task])
        if self.a is not None and "a" in d:
            d["a"] = [str(x) for x in self.a]
        if "grid" in d:
            d["grid"] = f"{self.grid[0]}:{self.grid[1]}"
        if isinstance(self.module, GlModule) and "module" in d:
            d["module"] = module_to_spec(self.module)
        if self.criteria is not None:
            d["criteria"] = list(self.criteria)
        return d


# -- configuration -------------------------------------------------------------

FIELDS = ("n", "a", "module", "deg", "grid", "trials", "seed", "m_max", "x", "y", "gen",
          "element", "max_deg", "criteria", "out")


def _key_lines(text: str) -> dict[str, int]:
    """1-based line of each top-level key, for diagnostics."""
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return {}
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {k.value: k.start_mark.line + 1 for k, _ in node.value if isinstance(k, yaml.ScalarNode)}


def load_config_file(path: str) -> tuple[dict, dict[str, int]]:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"{path}: cannot read config ({e.strerror})") from None
    try:
        # YAML is a superset of JSON, so one loader serves both
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f":{mark.line + 1}:{mark.column + 1}" if mark else ""
        raise ConfigError(f"{path}{where}: {getattr(e, 'problem', None) or e}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    data = {str(k).replace("-", "_"): v for k, v in data.items()}
    unknown = sorted(set(data) - set(FIELDS) - {"task"})
    if unknown:
        lines = _key_lines(text)
        k = unknown[0]
        raise ConfigError(f"{path}:{lines.get(k, '?')}: unknown field {k!r}")
    return data, _key_lines(text)


def _int(value, field: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(field, f"expected an integer, got {value!r}")
    try:
        out = int(str(value).strip())
    except ValueError:
        raise ParseError(field, f"expected an integer, got {value!r}") from None
    if minimum is not None and out < minimum:
        raise ParseError(field, f"must be >= {minimum}, got {out}")
    return out


def build_config(task: str, values: dict, source: str = "flags",
                 lines: dict[str, int] | None = None) -> RunConfig:
    """Validate raw values into a RunConfig; errors name the offending field."""
    lines = lines or {}
    cfg = RunConfig(task)
    current = ""
    try:
        for current in FIELDS:
            if values.get(current) is None:
                continue
            v = values[current]
            if current == "n":
                cfg.n = _int(v, "n", 1)
            elif current == "a":
                cfg.a = parse_rationals(v, "a")
            elif current == "module":
                cfg.module = v
            elif current in ("deg", "trials", "seed", "m_max", "max_deg"):
                setattr(cfg, current, _int(v, current, 0))
            elif current == "grid":
                cfg.grid = parse_grid(v, "grid")
            elif current == "criteria":
                items = v.split(",") if isinstance(v, str) else list(v)
                cfg.criteria = tuple(_int(x, "criteria", 1) for x in items)
            else:
                setattr(cfg, current, str(v))
        current = "n"
        if cfg.n is None and cfg.a is not None:
            cfg.n = len(cfg.a)
        if task not in ("all",) and cfg.n is None:
            raise ParseError("n", "required for this task (or give --a)")
        if cfg.n is not None:
            current = "a"
            if cfg.a is None:
                cfg.a = (Fraction(1),) * cfg.n
            if len(cfg.a) != cfg.n:
                raise ParseError("a", f"has {len(cfg.a)} entries, expected n={cfg.n}")
            current = "module"
            V = module_from_spec(cfg.n, cfg.module)
            if not isinstance(cfg.module, str):
                cfg.module = V
            if task in NEEDS_NONSINGULAR and not WhittakerType(cfg.a).nonsingular:
                raise ConfigError(f"a: task {task!r} needs a nonsingular type (every a_i != 0)")
        if cfg.criteria is not None:
            current = "criteria"
            bad = [k for k in cfg.criteria if not 1 <= k <= 9]
            if bad:
                raise ParseError("criteria", f"unknown criterion {bad[0]}")
    except ConfigError:
        raise
    except ParseError as e:
        where = f"{source}:{lines[e.field.split('[')[0]]}: " if e.field.split("[")[0] in lines else ""
        raise ConfigError(f"{where}{e}") from None
    except (ValueError, KeyError, TypeError) as e:
        where = f"{source}:{lines[current]}: " if current in lines else ""
        raise ConfigError(f"{where}{current}: {e}") from None
    return cfg


def parse_config(task: str, flags: dict, config_path: str | None = None) -> RunConfig:
    """File values first, then flags on top."""
    values: dict = {}
    lines: dict[str, int] = {}
    source = "flags"
    if config_path:
        values, lines = load_config_file(config_path)
        file_task = values.pop("task", None)
        if file_task is not None and file_task != task:
            raise ConfigError(f"{config_path}:{lines.get('task', '?')}: task {file_task!r} "
                              f"does not match the subcommand {task!r}")
        source = config_path
    overrides = {k: v for k, v in flags.items() if v is not None}
    for k in overrides:
        lines.pop(k, None)
    values.update(overrides)
    return build_config(task, values, source, lines)


# -- tasks -----------------------------------------------------------------------

def _str(x) -> str:
    return str(x)


def _module(cfg: RunConfig) -> GlModule:
    return module_from_spec(cfg.n, cfg.module)


def task_bracket(cfg: RunConfig) -> tuple[dict, bool]:
    from .witt import as_weyl
    if cfg.x is None or cfg.y is None:
        raise ConfigError("x, y: the bracket task needs --x and --y")
    try:
        X, Y = parse_witt(cfg.x, cfg.n, "x"), parse_witt(cfg.y, cfg.n, "y")
    except ParseError as e:
        raise ConfigError(str(e)) from None
    br = X.bracket(Y)
    comm = as_weyl(X).commutator(as_weyl(Y))
    agrees = as_weyl(br) == comm
    return {"x": str(X), "y": str(Y), "bracket": str(br), "weyl_commutator": str(comm),
            "agrees": agrees}, agrees


def task_phi(cfg: RunConfig) -> tuple[dict, bool]:
    from .smash import FieldGen, PolyGen, phi_generator
    from .witt import generators
    if cfg.gen is not None:
        try:
            terms = parse_terms(cfg.gen, cfg.n, "gen")
        except ParseError as e:
            raise ConfigError(str(e)) from None
        if len(terms) != 1 or terms[0][0] != 1 or terms[0][3] is not None or sum(terms[0][2]) > 1:
            raise ConfigError("gen: expected a single monomial t^m or t^m*d<k>")
        _, t, d, _ = terms[0]
        gens = [FieldGen(t, d.index(1)) if any(d) else PolyGen(t)]
    else:
        gens = [PolyGen(m) for m in mi.up_to_degree(cfg.n, cfg.deg)]
        gens += [FieldGen(m, k) for m, k in generators(cfg.n, cfg.deg)]
    images = [{"generator": str(g), "image": str(phi_generator(g))} for g in gens]
    return {"images": images}, True


def task_verify_iso(cfg: RunConfig) -> tuple[dict, bool]:
    from .smash import phi_truncation_rank, verify_phi_homomorphism
    hom = verify_phi_homomorphism(cfg.n, cfg.deg)
    tr = phi_truncation_rank(cfg.n, cfg.deg)
    return {"homomorphism": hom.to_json(), "truncation_rank": tr.to_json()}, hom.passed and tr.full


def _k_table(T: TensorModule, D: int) -> list[dict]:
    return [{"m": list(m), "k": _str(T.k_scalar(m))} for m in mi.up_to_degree(T.n, D)]


def task_whittaker(cfg: RunConfig) -> tuple[dict, bool]:
    from .acceptance import random_element
    T = TensorModule(cfg.a, _module(cfg))
    D = cfg.deg
    wh = T.whittaker_vectors(D)
    stable = T.whittaker_vectors(D + 1).dim == wh.dim
    res: dict = {"dim_module": T.dim, "dim_whittaker": wh.dim, "stable_in_deg": stable,
                 "nonsingular": T.a.nonsingular}
    ok = wh.dim == T.dim and stable
    if T.a.nonsingular:
        M = T.free_basis_matrix(D)
        invertible = rank(M) == len(M)
        rng = random.Random(cfg.seed)
        trips = sum(T.reassemble(T.decompose(w)) == w
                    for w in (random_element(T, rng, D) for _ in range(cfg.trials)))
        res.update({"k_table": _k_table(T, D), "free_basis_invertible": invertible,
                    "round_trip": {"trials": cfg.trials, "seed": cfg.seed, "passes": trips}})
        ok = ok and invertible and trips == cfg.trials
    else:
        M = T.free_basis_matrix(D, allow_singular=True)
        res["free_basis_rank"] = {"rank": rank(M), "size": len(M)}
    return res, ok


def task_decompose(cfg: RunConfig) -> tuple[dict, bool]:
    if cfg.element is None:
        raise ConfigError("element: the decompose task needs --element")
    T = TensorModule(cfg.a, _module(cfg))
    try:
        w = parse_tensor(cfg.element, T.V, "element")
    except ParseError as e:
        raise ConfigError(str(e)) from None
    if not w:
        raise ConfigError("element: must be nonzero")
    coeffs = T.decompose(w)
    ok = T.reassemble(coeffs) == w
    return {
        "element": str(w),
        "degree": list(T.degree_of(w)),
        "coefficients": [{"m": list(m), "v": j + 1, "coeff": _str(c)} for (m, j), c in coeffs.items()],
        "k_table": [{"m": list(m), "k": _str(T.k_scalar(m))}
                    for m in sorted({m for m, _ in coeffs}, key=mi.order_key)],
        "round_trip": ok,
    }, ok


def task_omega(cfg: RunConfig) -> tuple[dict, bool]:
    res = find_annihilating_m(cfg.a, _module(cfg), cfg.deg, cfg.m_max)
    return res.to_json(), res.m is not None and bool(res.monotone)


def task_complex(cfg: RunConfig) -> tuple[dict, bool]:
    from math import comb
    from .derham import check_equivariance, cyclicity_probe, image_submodule, verify_complex
    rep = verify_complex(cfg.a, cfg.n, cfg.deg)
    res = rep.to_json()
    ok = rep.passed
    equiv, witness = check_equivariance(cfg.a, cfg.n, cfg.deg)
    res["equivariant"] = equiv
    res["equivariance_witness"] = witness
    ok = ok and equiv
    if rep.nonsingular:
        images = []
        for k in range(1, cfg.n + 1):
            sub = image_submodule(cfg.a, cfg.n, k, cfg.deg)
            d = sub.whittaker_dim()
            entry = {"k": k, "dim_whittaker": d, "expected": comb(cfg.n - 1, k - 1)}
            ok = ok and d == entry["expected"]
            if cfg.trials:
                probe = cyclicity_probe(sub, cfg.trials, cfg.seed)
                entry["cyclicity"] = {"seed": probe.seed, "trials": probe.trials,
                                      "passes": probe.passes}
                ok = ok and probe.passed
            images.append(entry)
        res["images"] = images
    return res, ok


def task_weighting(cfg: RunConfig) -> tuple[dict, bool]:
    from .weighting import uniform_bound_check, verify_weight_representation, weight_grid
    grid = weight_grid(cfg.n, *cfg.grid)
    V = _module(cfg)
    rep = verify_weight_representation(cfg.a, V, cfg.deg, grid, cfg.max_deg)
    bound = uniform_bound_check(cfg.a, V, cfg.deg, grid)
    return {"representation": rep.to_json(), "uniform_bound": bound.to_json()}, \
        rep.passed and bound.passed


def task_all(cfg: RunConfig) -> tuple[dict, bool, dict]:
    from .acceptance import run_all
    results = run_all(cfg.criteria, echo=lambda line: print(line, file=sys.stderr))
    timing = {f"criterion_{r.number}": f"{r.seconds:.3f}" for r in results}
    return {"criteria": [r.to_json() for r in results]}, all(r.passed for r in results), timing


RUNNERS: dict[str, Callable] = {
    "bracket": task_bracket, "phi": task_phi, "verify-iso": task_verify_iso,
    "whittaker": task_whittaker, "decompose": task_decompose, "omega": task_omega,
    "complex": task_complex, "weighting": task_weighting, "all": task_all,
}


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def run(cfg: RunConfig) -> tuple[dict, bool]:
    """Run one task and assemble the report."""
    start = time.perf_counter()
    out = RUNNERS[cfg.task](cfg)
    results, passed = out[0], out[1]
    timing = dict(out[2]) if len(out) > 2 else {}
    timing["total_seconds"] = f"{time.perf_counter() - start:.3f}"
    report = {
        "tool": {"name": "whittaker-lab", "version": __version__},
        "task": cfg.task,
        "config": _jsonable(cfg.echo()),
        "passed": bool(passed),
        "results": _jsonable(results),
        "timing": timing,
    }
    return report, bool(passed)


def report_schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("report.schema.json").read_text())


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


# -- argument parsing --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="whittaker-lab", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"whittaker-lab {__version__}")
    sub = parser.add_subparsers(dest="task", required=True, metavar="TASK")
    helps = {
        "bracket": "bracket two vector fields and cross-check in the Weyl algebra",
        "phi": "images of generators under the smash-product isomorphism",
        "verify-iso": "homomorphism and truncation-rank checks for that isomorphism",
        "whittaker": "Whittaker vectors, k_m table and free-basis round trips",
        "decompose": "coordinates of an element in the free h-basis",
        "omega": "smallest m whose omega operators vanish",
        "complex": "twisted de Rham complex: exactness or singular defects",
        "weighting": "weight components: action, brackets, uniform bound",
        "all": "run the acceptance suite",
    }
    for name in TASKS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", help="YAML or JSON file with the same fields as the flags")
        p.add_argument("--out", help="write the JSON report here (default: stdout)")
        if name == "all":
            p.add_argument("--criteria", help="comma-separated subset, e.g. 1,5")
            continue
        p.add_argument("--n", help="number of variables")
        if name not in ("bracket", "phi", "verify-iso"):
            p.add_argument("--a", help="Whittaker type, e.g. 1,1/2 (default all ones)")
            p.add_argument("--module", help="trivial, natural or exterior:k")
        p.add_argument("--deg", help="truncation degree D")
        if name == "bracket":
            p.add_argument("--x", help="vector field, e.g. 't1^2*d1'")
            p.add_argument("--y", help="vector field")
        if name == "phi":
            p.add_argument("--gen", help="generator t^m or t^m*d<k> (default: all up to --deg)")
        if name == "decompose":
            p.add_argument("--element", help="tensor element, e.g. 't1*v1 - 2*v2'")
        if name in ("whittaker", "complex"):
            p.add_argument("--trials", help="random samples (round trips / cyclicity probes)")
            p.add_argument("--seed", help="seed for the samples")
        if name == "omega":
            p.add_argument("--m-max", dest="m_max", help="largest m to try (default 8)")
        if name == "weighting":
            p.add_argument("--grid", help="integer box lo:hi for every weight coordinate")
            p.add_argument("--max-deg", dest="max_deg", help="generator degree bound")
    return parser


_NEGATIVE = re.compile(r"-\d")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """``--grid -2:2`` -> ``--grid=-2:2``; argparse would read -2:2 as an option."""
    out: list[str] = []
    k = 0
    while k < len(argv):
        tok = argv[k]
        if (tok.startswith("--") and "=" not in tok and k + 1 < len(argv)
                and _NEGATIVE.match(argv[k + 1])):
            out.append(f"{tok}={argv[k + 1]}")
            k += 2
        else:
            out.append(tok)
            k += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_attach_negative_values(sys.argv[1:] if argv is None else list(argv)))
    flags = {k: v for k, v in vars(args).items() if k not in ("task", "config")}
    try:
        cfg = parse_config(args.task, flags, args.config)
        report, passed = run(cfg)
    except (ConfigError, SingularTypeError, TruncationError) as e:
        print(f"whittaker-lab {args.task}: error: {e}", file=sys.stderr)
        return 2
    text = dumps(report)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"whittaker-lab {args.task}: {'PASS' if passed else 'FAIL'}", file=sys.stderr)
    return 0 if passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
