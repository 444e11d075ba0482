"""Command-line front end.

    artinres JOB.json ring check
    artinres JOB.json module resolve M --steps 6
    artinres JOB.json module iso A B
    artinres JOB.json jclass torsion k --budget 10 --json

The job file holds ``{"algebra": {...}, "modules": {name: {...}}, "seed": int}``.
Algebra descriptors use one of two modes::

    {"p": 5, "mode": "polynomial_quotient", "variables": ["x"], "relations": ["x^4"]}
    {"p": 2, "mode": "structure_constants", "basis": ["1", "x"],
     "structure_constants": [[[...]]], "unit": [1, 0]}

``structure_constants[i][j][k]`` is the coefficient of ``e_k`` in ``e_i e_j``.
Module descriptors are documented in :func:`artinres.modules.construct_module`.

Exit codes: 0 certified yes, 2 certified no, 3 budget exhausted, 1 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Mapping

import numpy as np

from .algebra import Algebra, build_algebra, quotient_from_polynomials
from .decomp import DEFAULT_BUDGET, ClassRegistry, Iso, NonIso, decompose_with_embeddings, is_isomorphic
from .errors import ArtinresError, BudgetExceeded, NotGorenstein, NotSingleClass
from .jmod import Torsion, find_periodic_module, hypersurface_check, j_class, j_equal, torsion_test
from .modules import Module, construct_module, cosyzygy, free_envelope, syzygy
from .resolution import Periodic, detect_periodicity, minimal_resolution

EXIT_OK, EXIT_INPUT, EXIT_NO, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


class Job:
    def __init__(self, data: Mapping[str, Any], seed: int | None = None):
        if not isinstance(data, Mapping):
            raise InputError("job file must contain a JSON object")
        if "algebra" not in data:
            raise InputError("job: missing 'algebra'")
        self.seed = int(seed if seed is not None else data.get("seed", 0))
        try:
            self.algebra = load_algebra(data["algebra"])
        except (ArtinresError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"algebra: {exc}") from exc
        self._specs = dict(data.get("modules", {}))
        self._modules: dict[str, Module] = {}

    def registry(self, budget: int = DEFAULT_BUDGET) -> ClassRegistry:
        return ClassRegistry(self.algebra, budget=budget, seed=self.seed)

    def module(self, name: str, _stack: tuple = ()) -> Module:
        if name in self._modules:
            return self._modules[name]
        if name not in self._specs:
            raise InputError(f"modules.{name}: not defined")
        if name in _stack:
            raise InputError(f"modules.{name}: circular reference")
        spec = self._specs[name]
        refs = _references(spec)
        named = {r: self.module(r, _stack + (name,)) for r in refs if r in self._specs}
        try:
            M = construct_module(self.algebra, spec, named)
        except (ArtinresError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"modules.{name}: {exc}") from exc
        self._modules[name] = M
        return M

    @property
    def module_names(self) -> list[str]:
        return sorted(self._specs)


def _references(spec) -> list[str]:
    if isinstance(spec, str):
        return [spec]
    if isinstance(spec, Mapping):
        out = []
        for s in spec.get("summands", []):
            out.extend(_references(s))
        return out
    return []


def load_algebra(desc: Mapping[str, Any]) -> Algebra:
    mode = desc.get("mode", "polynomial_quotient")
    p = int(desc["p"])
    if mode == "polynomial_quotient":
        return quotient_from_polynomials(p, desc["variables"], desc.get("relations", []))
    if mode == "structure_constants":
        c = desc["structure_constants"]
        names = desc.get("basis") or [f"e{i}" for i in range(len(c))]
        return build_algebra(p, names, c, desc["unit"])
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# commands: each returns (exit code, result dict, human text)
# ---------------------------------------------------------------------------


def _module_summary(M: Module) -> dict:
    return {"dim": M.dim, "nu": M.nu, "action": M.action.tolist()}


def cmd_ring_check(job: Job, args) -> tuple[int, dict, str]:
    prof = job.algebra.profile.as_dict()
    text = "\n".join(
        [
            f"p: {prof['p']}",
            f"dim: {prof['dim']}",
            f"embedding_dim: {prof['embedding_dim']}",
            f"socle_dim: {prof['socle_dim']}",
            f"loewy_length: {prof['loewy_length']}",
            f"Gorenstein: {str(prof['is_gorenstein']).lower()}",
            f"hypersurface: {str(prof['is_hypersurface']).lower()}",
        ]
    )
    return EXIT_OK, {"profile": prof}, text


def cmd_ring_hypersurface(job: Job, args) -> tuple[int, dict, str]:
    reg = job.registry()
    samples = [job.module(n) for n in (args.modules or job.module_names)]
    report = hypersurface_check(job.algebra, samples, reg, args.budget or 8)
    report["sample_names"] = args.modules or job.module_names
    text = f"claim: {report['claim']}\npassed: {str(report['passed']).lower()}"
    return (EXIT_OK if report["passed"] else EXIT_NO), report, text


def cmd_ring_find_periodic(job: Job, args) -> tuple[int, dict, str]:
    reg = job.registry()
    budget = args.budget or 10
    found = find_periodic_module(job.algebra, args.generators, budget, reg)
    if found is None:
        return EXIT_BUDGET, {"found": False, "generators": args.generators, "budget": budget}, "none found within budget"
    out = found.to_dict()
    out["module"] = _module_summary(found.module)
    return EXIT_OK, out, f"found: dim {found.module.dim}, period {found.period}"


def cmd_resolve(job: Job, args) -> tuple[int, dict, str]:
    M = job.module(args.module)
    res = minimal_resolution(M, args.steps)
    text = "\n".join(f"{i}: rank {b}, syzygy dim {S.dim}" for i, (b, S) in enumerate(zip(res.betti, res.syzygy_chain)))
    return EXIT_OK, res.to_dict(), text or "zero module"


def cmd_betti(job: Job, args) -> tuple[int, dict, str]:
    M = job.module(args.module)
    b = list(minimal_resolution(M, args.steps).betti)
    b += [0] * (args.steps + 1 - len(b))
    return EXIT_OK, {"betti": b}, " ".join(map(str, b))


def cmd_syzygy(job: Job, args) -> tuple[int, dict, str]:
    M = job.module(args.module)
    S = syzygy(M, args.n)
    return EXIT_OK, {"n": args.n, "module": _module_summary(S)}, f"dim {S.dim}, nu {S.nu}"


def cmd_cosyzygy(job: Job, args) -> tuple[int, dict, str]:
    M = job.module(args.module)
    cur, injective = M, True
    for _ in range(args.n):
        injective = injective and free_envelope(cur).is_injective()
        cur = cosyzygy(cur, 1)
    out = {"n": args.n, "module": _module_summary(cur), "envelopes_injective": injective}
    return EXIT_OK, out, f"dim {cur.dim}, nu {cur.nu}, envelopes injective: {str(injective).lower()}"


def cmd_decompose(job: Job, args) -> tuple[int, dict, str]:
    M = job.module(args.module)
    reg = job.registry(args.budget or DEFAULT_BUDGET)
    parts = decompose_with_embeddings(M, reg.budget, reg.rng)
    rows = [
        {"dim": S.module.dim, "free": S.module.is_free, "certificate": S.certificate, "basis": S.basis.tolist()}
        for S in parts
    ]
    text = "\n".join(f"summand dim {r['dim']}{' (free)' if r['free'] else ''}: {r['certificate']}" for r in rows)
    return EXIT_OK, {"summands": rows}, text or "zero module"


def cmd_iso(job: Job, args) -> tuple[int, dict, str]:
    M, N = job.module(args.a), job.module(args.b)
    reg = job.registry(args.budget or DEFAULT_BUDGET)
    v = is_isomorphic(M, N, reg.budget, reg.rng, reg.depth)
    if isinstance(v, Iso):
        return EXIT_OK, v.to_dict(), f"isomorphic ({v.method})"
    if isinstance(v, NonIso):
        return EXIT_NO, v.to_dict(), f"not isomorphic ({v.reason})"
    return EXIT_BUDGET, v.to_dict(), f"undecided after {v.trials} trials"


def cmd_period(job: Job, args) -> tuple[int, dict, str]:
    M = job.module(args.module)
    reg = job.registry()
    v = detect_periodicity(M, args.budget or 10, reg)
    if isinstance(v, Periodic):
        return EXIT_OK, v.to_dict(), f"Periodic(lead={v.lead}, period={v.period})"
    return EXIT_BUDGET, v.to_dict(), "ExceededBudget betti " + " ".join(map(str, v.betti))


def cmd_normal_form(job: Job, args) -> tuple[int, dict, str]:
    reg = job.registry()
    x = j_class(job.module(args.module), reg)
    out = x.to_dict()
    text = " + ".join(f"{c['coefficient']}*[{c['id']}]" for c in out["classes"]) or "0"
    return EXIT_OK, out, text


def cmd_equal(job: Job, args) -> tuple[int, dict, str]:
    reg = job.registry()
    x, y = j_class(job.module(args.a), reg), j_class(job.module(args.b), reg)
    eq = j_equal(x, y)
    exact = job.algebra.profile.is_gorenstein
    out = {"equal": eq, "certified": eq or exact, "a": x.to_dict(), "b": y.to_dict()}
    if eq:
        return EXIT_OK, out, "equal"
    if exact:
        return EXIT_NO, out, "not equal"
    return EXIT_BUDGET, out, "normal forms differ; equality undecided over a non-Gorenstein algebra"


def cmd_torsion(job: Job, args) -> tuple[int, dict, str]:
    reg = job.registry()
    x = j_class(job.module(args.module), reg)
    v = torsion_test(x, args.budget or 10, reg)
    if isinstance(v, Torsion):
        return EXIT_OK, v.to_dict(), f"Torsion(annihilator={v.annihilator}, method={v.method})"
    lines = ["ExceededBudget"]
    for cid, b in v.detail.get("betti", {}).items():
        lines.append(f"class {cid} betti: " + ", ".join(map(str, b)))
    return EXIT_BUDGET, v.to_dict(), "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--steps", type=int, default=6)
    common.add_argument("--json", action="store_true", help="emit the result object as JSON")
    common.add_argument("--quiet", action="store_true", help="suppress output; exit code only")

    ap = argparse.ArgumentParser(prog="artinres", description=__doc__.split("\n\n")[0])
    ap.add_argument("job", help="JSON job file ('-' for stdin)")
    groups = ap.add_subparsers(dest="group", required=True)

    ring = groups.add_parser("ring").add_subparsers(dest="cmd", required=True)
    ring.add_parser("check", parents=[common]).set_defaults(func=cmd_ring_check)
    h = ring.add_parser("hypersurface-check", parents=[common])
    h.add_argument("modules", nargs="*", help="sample module names (default: all)")
    h.set_defaults(func=cmd_ring_hypersurface)
    f = ring.add_parser("find-periodic", parents=[common])
    f.add_argument("--generators", type=int, default=16)
    f.set_defaults(func=cmd_ring_find_periodic)

    mod = groups.add_parser("module").add_subparsers(dest="cmd", required=True)
    for name, func in [
        ("resolve", cmd_resolve),
        ("betti", cmd_betti),
        ("decompose", cmd_decompose),
        ("period", cmd_period),
    ]:
        s = mod.add_parser(name, parents=[common])
        s.add_argument("module")
        s.set_defaults(func=func)
    for name, func in [("syzygy", cmd_syzygy), ("cosyzygy", cmd_cosyzygy)]:
        s = mod.add_parser(name, parents=[common])
        s.add_argument("module")
        s.add_argument("-n", type=int, default=1)
        s.set_defaults(func=func)
    s = mod.add_parser("iso", parents=[common])
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_iso)

    jc = groups.add_parser("jclass").add_subparsers(dest="cmd", required=True)
    s = jc.add_parser("normal-form", parents=[common])
    s.add_argument("module")
    s.set_defaults(func=cmd_normal_form)
    s = jc.add_parser("equal", parents=[common])
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_equal)
    s = jc.add_parser("torsion", parents=[common])
    s.add_argument("module")
    s.set_defaults(func=cmd_torsion)
    return ap


def _read_job(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _validate(args) -> None:
    if args.budget is not None and args.budget <= 0:
        raise InputError("--budget must be positive")
    if args.steps < 0:
        raise InputError("--steps must be non-negative")
    if getattr(args, "n", 1) < 0:
        raise InputError("-n must be non-negative")


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        job = Job(_read_job(args.job), args.seed)
        code, result, text = args.func(job, args)
    except InputError as exc:
        code, result, text = EXIT_INPUT, {"error": str(exc)}, f"error: {exc}"
    except BudgetExceeded as exc:
        code, result, text = EXIT_BUDGET, {"error": str(exc), "detail": exc.data}, f"budget exceeded: {exc}"
    except (NotGorenstein, NotSingleClass) as exc:
        code, result, text = EXIT_INPUT, {"error": str(exc)}, f"error: {exc}"
    except (ArtinresError, ValueError, KeyError) as exc:
        code, result, text = EXIT_INPUT, {"error": str(exc)}, f"error: {exc}"
    if not args.quiet:
        if args.json:
            result = dict(result, exit_code=code)
            out.write(json.dumps(result, sort_keys=True, default=_json_default) + "\n")
        else:
            out.write(text + "\n")
    return code


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
