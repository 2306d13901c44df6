"""Command line entry point: ``d2dstream {run,batch,compare,validate,make-trace}``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import _backend
from .batch import compare, run_seeds
from .config import ConfigError, lint, load_config
from .engine import run
from .optimizer import Mode
from .results import ResultsError, emit_results
from .trace import TraceError, synthetic_trace, write_trace


def _add_common(p):
    p.add_argument("--config", required=True, type=Path, help="TOML run configuration")
    p.add_argument("--out", type=Path, help="output directory (overrides [output] directory)")
    p.add_argument("--zoom", nargs=2, type=int, metavar=("START", "END"),
                   help="slot range for the cumulative-curve CSV (inclusive)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="d2dstream",
        description="VBR video over a D2D cellular link: per-slot power control and mode selection.",
    )
    parser.add_argument("--quiet", action="store_true", help="suppress the progress summary on stdout")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("run", help="simulate one scenario with one seed")
    _add_common(p)
    p.add_argument("--seed", type=int, help="fading seed (overrides [fading] seed)")
    p.add_argument("--forced-mode", choices=[m.label for m in Mode],
                   help="use one mode for every slot instead of mode selection")

    p = sub.add_parser("batch", help="seed sweep of one strategy, aggregated as mean and 95%% CI")
    _add_common(p)
    p.add_argument("--seed", type=int, help="first seed")
    p.add_argument("--seeds", type=int, help="number of consecutive seeds")
    p.add_argument("--forced-mode", choices=[m.label for m in Mode])
    p.add_argument("--workers", type=int, help="worker processes")

    p = sub.add_parser("compare", help="all three forced modes plus mode selection on shared seeds")
    _add_common(p)
    p.add_argument("--seed", type=int, help="first seed")
    p.add_argument("--seeds", type=int, help="number of consecutive seeds")
    p.add_argument("--decouple-fading", action="store_true",
                   help="give each strategy its own fading realisation")
    p.add_argument("--workers", type=int, help="worker processes")

    p = sub.add_parser("validate", help="check a config and its traces, listing every problem")
    p.add_argument("--config", required=True, type=Path)

    p = sub.add_parser("make-trace", help="write a synthetic heavy-tailed VBR trace file")
    p.add_argument("-o", "--output", required=True, type=Path)
    p.add_argument("--frames", type=int, default=5000)
    p.add_argument("--mean-bits", type=float, default=22000.0)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--tail-index", type=float, default=2.5, help="Pareto shape of frame sizes")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _apply_overrides(cfg, args):
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
        changes["fading"] = replace(cfg.fading, seed=args.seed)
    if getattr(args, "seeds", None) is not None:
        if args.seeds < 1:
            raise ConfigError(["--seeds must be at least 1"])
        changes["n_seeds"] = args.seeds
    if getattr(args, "forced_mode", None):
        changes["forced_mode"] = Mode.parse(args.forced_mode)
    if getattr(args, "workers", None) is not None:
        changes["workers"] = max(1, args.workers)
    if getattr(args, "decouple_fading", False):
        changes["decouple_fading"] = True
    if getattr(args, "out", None) is not None:
        changes["output_dir"] = args.out
    if getattr(args, "zoom", None) is not None:
        changes["zoom"] = tuple(args.zoom)
    return replace(cfg, **changes)


def _report(summary_groups, quiet):
    if quiet:
        return
    for name, results in summary_groups.items():
        n = len(results)
        probs = [sum(r.summary["receivers"][rx]["underflow_probability"] for r in results) / n
                 for rx in ("C1", "D2")]
        print(f"{name:>10}: underflow C1={probs[0]:.4g} D2={probs[1]:.4g} over {n} seed(s)")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "make-trace":
            tr = synthetic_trace(args.frames, args.mean_bits, args.seed, args.fps, args.tail_index)
            write_trace(tr, args.output, comment=f"synthetic Pareto({args.tail_index}) trace, seed {args.seed}")
            return 0

        if args.command == "validate":
            try:
                cfg = load_config(args.config)
            except ConfigError as exc:
                for p in exc.problems:
                    print(f"error: {p}", file=sys.stderr)
                return 1
            problems = lint(cfg)
            for p in problems:
                print(f"error: {p}", file=sys.stderr)
            if not problems and not args.quiet:
                print(f"{args.config}: ok")
            return 1 if problems else 0

        cfg = _apply_overrides(load_config(args.config), args)
        problems = lint(cfg)
        if problems:
            raise ConfigError(problems)
        scenario = cfg.scenario()

        if args.command == "run":
            result = run(scenario.with_seed(cfg.seed))
            groups = {result.strategy: [result]}
        elif args.command == "batch":
            results = run_seeds(scenario, cfg.seeds, cfg.workers)
            groups = {results[0].strategy: results}
        else:
            groups = compare(scenario.forced(None), cfg.seeds, cfg.decouple_fading, cfg.workers)

        emit_results(groups, cfg)
        _report(groups, args.quiet)
        if not args.quiet:
            print(f"results in {cfg.output_dir} (kernels: {_backend.NAME})")
        return 0
    except ConfigError as exc:
        for p in exc.problems:
            print(f"error: {p}", file=sys.stderr)
        return 1
    except (TraceError, ResultsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
