"""Command-line entry point.

Exit codes: 0 success, 1 input error (or failed verification / audit), 2 search
budget exhausted without a certificate.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .chess import ChessComplex, connectivity_violations, homology_ranks
from .config import random_natural_config
from .models import Model, ModelError, list_demos, resolve_model
from .solver import (
    DRAGON_PLATES,
    DRAGON_PLAYERS,
    ENVYFREE,
    SearchTooLarge,
    _solve,
    certificate_from_json,
    certificate_to_json,
    verify_certificate,
)
from .symmetry import audit_equivariance

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2

VARIANTS = {"envyfree": ENVYFREE, "dragon-piece": DRAGON_PLATES, "dragon-player": DRAGON_PLAYERS}


@dataclass
class RunSpec:
    command: str
    model: str | None = None
    grid: int = 32
    eps: float = 1e-3
    budget: int = 40
    seed: int = 0
    threads: int = 1
    out: str | None = None

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("--eps must be positive")
        if self.grid < 2:
            raise ValueError("--grid must be at least 2")
        if self.budget < 0:
            raise ValueError("--budget must be non-negative")


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _variant_for(model: Model, requested: str | None) -> str:
    if requested:
        return VARIANTS[requested]
    o = model.oracle
    by_count = {o.r: ENVYFREE, o.r - 1: DRAGON_PLATES, o.r + 1: DRAGON_PLAYERS}
    if o.n_players not in by_count:
        raise ModelError(f"{o.n_players} players on {o.r} plates fits no problem variant")
    return by_count[o.n_players]


def explain(model: Model, config) -> str:
    """Score table: content value, score and margin for every player and plate."""
    o = model.oracle
    lines = [f"configuration: cut {list(config.points)}  alloc {list(config.alloc)}"]
    header = "player  " + " ".join(f"{'plate ' + str(i):>10}" for i in range(1, o.r + 1))
    for j in range(1, o.n_players + 1):
        contents = o.contents(config, j)
        scores = o.plate_scores(config, j)
        mask = o.preferred_mask(config, j)
        lines.append(header)
        lines.append(f"{j:>6} content " + " ".join(f"{x:>10.6g}" for x in contents))
        lines.append(f"{'':>6} score   " + " ".join(f"{x:>10.6g}" for x in scores))
        empty = set(range(1, o.r + 1)) - set(config.alloc)
        marks = [("*" if mask[i - 1] else "") + ("(empty)" if i in empty else "") for i in range(1, o.r + 1)]
        lines.append(f"{'':>6} chosen  " + " ".join(f"{m:>10}" for m in marks))
    return "\n".join(lines) + "\n"


def cmd_solve(args) -> int:
    try:
        spec = RunSpec("solve", args.model, args.grid, args.eps, args.budget, args.seed, args.threads, args.out)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            model = resolve_model(spec.model, spec.seed)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        kind = _variant_for(model, args.variant)
    except (ModelError, ValueError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    if args.explain and model.example_config is not None:
        sys.stderr.write(explain(model, model.example_config))
    try:
        result = _solve(
            model.oracle, kind, spec.grid, spec.eps, spec.budget, threads=spec.threads
        )
    except (SearchTooLarge, ValueError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    if args.explain:
        sys.stderr.write(explain(model, result.incumbent))
    if result.certificate is None:
        _emit(
            _dump(
                {
                    "status": "budget-exhausted",
                    "kind": kind,
                    "incumbent": result.incumbent.to_json(),
                    "potential": result.potential,
                    "levels": result.levels,
                    "evaluations": result.evaluations,
                }
            ),
            spec.out,
        )
        return EXIT_BUDGET
    _emit(_dump(certificate_to_json(result.certificate)), spec.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        model = resolve_model(args.model, args.seed)
        data = json.loads(Path(args.cert).read_text())
        cert = certificate_from_json(data)
    except (ModelError, OSError, ValueError, KeyError, TypeError) as exc:
        _err(f"cannot load certificate or model: {exc}")
        return EXIT_INPUT
    report = verify_certificate(cert, model.oracle)
    if args.json:
        sys.stdout.write(_dump({"kind": cert.kind, **report.to_json()}))
    else:
        print(f"{cert.kind} certificate, eps = {cert.eps:g}")
        print(f"{'player':>6} {'plate':>6} {'role':>8} {'margin':>14}  ok")
        for row in report.rows:
            print(
                f"{row['player']:>6} {row['plate']:>6} {row['role']:>8} {row['margin']:>14.6g}  "
                f"{'yes' if row['accepted'] else 'NO'}"
            )
        for e in report.errors:
            print(f"FAIL: {e}")
        print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_INPUT


def cmd_chess(args) -> int:
    c = ChessComplex(args.m, args.n)
    try:
        rows = homology_ranks(c)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INPUT
    violations = connectivity_violations(c, rows)
    table = {
        "m": c.m,
        "n": c.n,
        "dimension": c.dim,
        "rows": [
            {"dim": h.dim, "faces": h.faces, "reduced_betti": h.betti, "torsion": list(h.torsion)}
            for h in rows
        ],
        "connectivity_expected": c.n >= 2 * c.m - 1,
        "connectivity_violations": violations,
    }
    sys.stdout.write(_dump(table))
    return EXIT_OK if not violations else EXIT_INPUT


def cmd_audit(args) -> int:
    try:
        model = resolve_model(args.model, args.seed)
    except ModelError as exc:
        _err(str(exc))
        return EXIT_INPUT
    if args.samples <= 0:
        print("warning: no samples, the audit checks nothing", file=sys.stderr)
    rng = np.random.default_rng(args.seed)
    samples = [random_natural_config(rng, model.r) for _ in range(max(0, args.samples))]
    violations = audit_equivariance(model.oracle, samples, model.oracle.group)
    report = {
        "model": model.name,
        "samples": len(samples),
        "group": {"p": model.oracle.group.p, "nu": model.oracle.group.nu},
        "violations": [
            {
                "sample": v.sample,
                "player": v.player,
                "plate": v.plate,
                "element": list(v.element),
                "before": v.before,
                "after": v.after,
                "config": samples[v.sample].to_json(),
            }
            for v in violations
        ],
        "ok": not violations,
    }
    _emit(_dump(report), args.out)
    return EXIT_OK if not violations else EXIT_INPUT


def cmd_demo(args) -> int:
    if args.list or not args.name:
        for name in list_demos():
            print(name)
        return EXIT_OK
    try:
        model = resolve_model(args.name)
    except ModelError as exc:
        _err(str(exc))
        return EXIT_INPUT
    print(f"{model.name}: {model.description}")
    if model.example_config is not None:
        print(explain(model, model.example_config), end="")
    if args.explain and model.example_config is not None:
        return EXIT_OK
    kind = _variant_for(model, None)
    try:
        result = _solve(model.oracle, kind, args.grid, args.eps, args.budget, threads=args.threads)
    except SearchTooLarge as exc:
        print(f"search skipped: {exc}")
        return EXIT_OK
    if result.certificate is None:
        print(f"budget exhausted; best potential {result.potential:.3g}")
        return EXIT_BUDGET
    print(explain(model, result.certificate.config), end="")
    report = verify_certificate(result.certificate, model.oracle)
    print(_dump(certificate_to_json(result.certificate)), end="")
    print("verified" if report.ok else f"verification FAILED: {report.errors}")
    return EXIT_OK if report.ok else EXIT_INPUT


def _search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=int, default=32, help="coarse grid resolution N (cut points at t/N)")
    p.add_argument("--eps", type=float, default=1e-3, help="target tolerance")
    p.add_argument("--budget", type=int, default=40, help="maximum refinement levels")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coopcake", description=__doc__.splitlines()[0])
    parser.add_argument("--list-demos", action="store_true", help="list shipped demo models and exit")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("solve", help="search for a certificate")
    p.add_argument("model", nargs="?", help="model file, demo name or random:R[:style]")
    p.add_argument("--model", dest="model_opt")
    p.add_argument("--variant", choices=sorted(VARIANTS))
    p.add_argument("--seed", type=int, default=0, help="seed for random:R models")
    p.add_argument("--out")
    p.add_argument("--explain", action="store_true", help="print score tables on stderr")
    _search_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="recheck a certificate against a model")
    p.add_argument("cert")
    p.add_argument("model", nargs="?")
    p.add_argument("--model", dest="model_opt")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0, help="seed for random:R models")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("chess", help="homology of the chessboard complex Δ_{m,n}")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_chess)

    p = sub.add_parser("audit", help="sampled equivariance audit of a model")
    p.add_argument("model", nargs="?")
    p.add_argument("--model", dest="model_opt")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("demo", help="run a shipped demo")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--explain", action="store_true", help="only print the example score table")
    _search_flags(p)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list_demos:
        for name in list_demos():
            print(name)
        return EXIT_OK
    if args.command is None:
        parser.print_help()
        return EXIT_INPUT
    if hasattr(args, "model_opt"):
        args.model = args.model_opt or args.model
        if not args.model:
            _err("a model file or demo name is required")
            return EXIT_INPUT
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
