"""Command-line front end.

Subcommands: `spectrum` (force-noise sweep), `compare` (exact vs reduced
model), `cooling` (occupancy report, optionally with pump optimisation),
`verify` (the invariant suite).  Exit codes: 0 success, 1 invariant
failure, 2 configuration error, 3 optical singularity over more than 10%
of the grid, 4 anti-damped (unstable) system.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config
from .errors import ConfigError, OpticalSingularity, UnstableSystem
from .outputs import run_compare, run_cooling, run_spectrum
from .verify import DEFAULT_SEED, run_all

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_CONFIG = 2
EXIT_SINGULAR = 3
EXIT_UNSTABLE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msinoise",
        description=(
            "Quantum noise and dynamic back-action of asymmetric recycled "
            "Michelson-Sagnac interferometers"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        p.add_argument("--config", type=Path, required=needs_config,
                       help="JSON run configuration (SI units)")
        p.add_argument("--out", type=Path, default=Path("."),
                       help="output directory (default: current)")
        p.add_argument("--threads", type=int, default=1,
                       help="grid evaluation workers (results are identical "
                            "for any count)")

    p_spec = sub.add_parser("spectrum", help="force-noise sweep to CSV/JSON")
    common(p_spec)

    p_cmp = sub.add_parser("compare", help="exact vs reduced-model error sweep")
    common(p_cmp)

    p_cool = sub.add_parser("cooling", help="steady-state occupancy report")
    common(p_cool)
    p_cool.add_argument("--optimize", action="store_true",
                        help="also optimise the pump split at fixed energy")

    p_ver = sub.add_parser("verify", help="run the invariant suite")
    p_ver.add_argument("--config", type=Path, default=None,
                       help="optional JSON with a verify_tolerances object")
    p_ver.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help="seed for the randomized ensembles")
    return parser


def _cmd_spectrum(args) -> int:
    cfg = load_config(args.config)
    try:
        summary = run_spectrum(cfg, args.out, threads=args.threads)
    except OpticalSingularity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    if summary["skipped"] > 0.10 * summary["total"]:
        print(
            f"error: {summary['skipped']} of {summary['total']} grid points "
            "were singular",
            file=sys.stderr,
        )
        return EXIT_SINGULAR
    print(f"wrote {args.out / 'spectrum.csv'} ({summary['rows']} rows)")
    return EXIT_OK


def _cmd_compare(args) -> int:
    cfg = load_config(args.config)
    try:
        summary = run_compare(cfg, args.out, threads=args.threads)
    except OpticalSingularity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    if summary["skipped"] > 0.10 * summary["total"]:
        print(
            f"error: {summary['skipped']} of {summary['total']} grid points "
            "were singular",
            file=sys.stderr,
        )
        return EXIT_SINGULAR
    print(f"wrote {args.out / 'compare.csv'} ({summary['rows']} rows)")
    return EXIT_OK


def _cmd_cooling(args) -> int:
    cfg = load_config(args.config)
    if cfg.mechanical is None:
        raise ConfigError("mechanical", "cooling needs a mechanical block")
    try:
        report = run_cooling(cfg, args.out, optimize=args.optimize)
    except UnstableSystem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except OpticalSingularity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    print(f"wrote {args.out / 'cooling.json'} (n_bar = {report['n_bar']:.6g})")
    return EXIT_OK


def _cmd_verify(args) -> int:
    overrides = {}
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("<file>", str(exc)) from exc
        overrides = raw.get("verify_tolerances", {})
        if not isinstance(overrides, dict):
            raise ConfigError("verify_tolerances", "must be an object")
    results = run_all(seed=args.seed, tol_overrides=overrides)
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} invariant(s) failed: "
              + ", ".join(r.name for r in failed), file=sys.stderr)
        return EXIT_INVARIANT
    print(f"all {len(results)} invariants passed")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "spectrum": _cmd_spectrum,
        "compare": _cmd_compare,
        "cooling": _cmd_cooling,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
