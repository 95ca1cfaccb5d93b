"""Command-line interface.

Subcommands: solve, density, entropy, sweep, predict, reproduce <fig>.
Exit codes: 0 success, 2 validation error, 3 solver failure, 4 degenerate
ground state.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .entanglement import block_entropy, CSV_HEADER, density_profile
from .errors import DegenerateGroundStateError, SolverError, ValidationError
from .lattice import chain_from_json_dict
from .runner import (
    parse_blocks_argument,
    run_sweep,
    sweep_plan_from_json_dict,
    write_json,
    write_rows_csv,
)
from .scenarios import FIGURES, reproduce
from .solve import solve_chain

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_DEGENERATE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entchain",
        description="Exact diagonalization of inhomogeneous Hubbard chains and "
                    "block mode-entanglement entropies (energies in units of t, "
                    "entropies in bits).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="path to a JSON chain config")
        p.add_argument("--out", help="output directory (default: print to stdout)")
        p.add_argument("--allow-degenerate", action="store_true",
                       help="proceed on degenerate ground states (outputs marked unreliable)")

    p_solve = sub.add_parser("solve", help="ground-state energy and convergence data")
    add_common(p_solve)
    p_solve.add_argument("--dump-state", action="store_true",
                         help="include the amplitude vector in the JSON output")

    p_density = sub.add_parser("density", help="site density profile")
    add_common(p_density)

    p_entropy = sub.add_parser("entropy", help="block entanglement entropies")
    add_common(p_entropy)
    p_entropy.add_argument("--blocks", required=True, action="append",
                           help="block spec: comma-separated sites ('0,1,2') or "
                                "'<x>:<contiguous|all_subsets>'; repeatable")

    p_sweep = sub.add_parser("sweep", help="run a sweep plan from a JSON config")
    p_sweep.add_argument("--config", required=True, help="path to a JSON sweep config")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.add_argument("--allow-degenerate", action="store_true")

    p_predict = sub.add_parser("predict", help="enhancement-regime verdict from filling "
                                               "arithmetic (no solve)")
    p_predict.add_argument("--config", required=True, help="path to a JSON chain config")
    p_predict.add_argument("--out", help="output directory (default: print to stdout)")

    p_repro = sub.add_parser("reproduce", help="run a canned figure scenario")
    p_repro.add_argument("figure", choices=FIGURES)
    p_repro.add_argument("--out", required=True, help="output directory")
    p_repro.add_argument("--workers", type=int, default=1)

    return parser


def _load_json(path: str) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}")
    except json.JSONDecodeError as err:
        raise ValidationError(f"invalid JSON in {path}: {err}")


def _emit(text: str, out: str | None, filename: str) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        path = Path(out) / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text if text.endswith("\n") else text + "\n")
        print(path)


def _cmd_solve(args) -> int:
    spec = chain_from_json_dict(_load_json(args.config))
    basis, gs = solve_chain(spec, allow_degenerate=args.allow_degenerate)
    doc = gs.summary()
    doc["dim"] = basis.dim
    if args.dump_state:
        doc["vector"] = [float(v) for v in gs.vector]
    _emit(json.dumps(doc, indent=2, sort_keys=True), args.out, "ground_state.json")
    return EXIT_OK


def _cmd_density(args) -> int:
    spec = chain_from_json_dict(_load_json(args.config))
    basis, gs = solve_chain(spec, allow_degenerate=args.allow_degenerate)
    profile = density_profile(gs, basis)
    lines = ["site,density"] + [f"{i},{float(n)!r}" for i, n in enumerate(profile)]
    _emit("\n".join(lines), args.out, "density.csv")
    return EXIT_OK


def _cmd_entropy(args) -> int:
    spec = chain_from_json_dict(_load_json(args.config))
    blocks = []
    for arg in args.blocks:
        explicit, descriptor = parse_blocks_argument(arg)
        blocks.extend(explicit)
        if descriptor is not None:
            from .lattice import enumerate_blocks

            blocks.extend(enumerate_blocks(spec.L, descriptor[0], descriptor[1], spec.boundary))
    basis, gs = solve_chain(spec, allow_degenerate=args.allow_degenerate)
    profile = density_profile(gs, basis)
    lines = [",".join(CSV_HEADER)]
    for block in blocks:
        report = block_entropy(gs, basis, block, spec=spec, profile=profile)
        lines.append(",".join(str(v) for v in report.to_csv_row()))
    _emit("\n".join(lines), args.out, "entropy.csv")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    plan = sweep_plan_from_json_dict(_load_json(args.config))
    rows = run_sweep(plan, workers=args.workers, allow_degenerate=args.allow_degenerate)
    out = Path(args.out)
    write_rows_csv(rows, out / "sweep.csv")
    write_json({"rows": len(rows), "axis": plan.axis,
                "values": list(plan.values)}, out / "sweep_summary.json")
    print(out / "sweep.csv")
    return EXIT_OK


def _cmd_predict(args) -> int:
    from .predictor import predict_enhancement_regime

    spec = chain_from_json_dict(_load_json(args.config))
    verdict = predict_enhancement_regime(spec)
    _emit(verdict.to_json(indent=2), args.out, "prediction.json")
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    summary = reproduce(args.figure, Path(args.out), workers=args.workers)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {
        "solve": _cmd_solve,
        "density": _cmd_density,
        "entropy": _cmd_entropy,
        "sweep": _cmd_sweep,
        "predict": _cmd_predict,
        "reproduce": _cmd_reproduce,
    }[args.command]
    try:
        return handler(args)
    except DegenerateGroundStateError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SOLVER


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
