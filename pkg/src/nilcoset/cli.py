"""Command-line driver.

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or resource error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .groups import GroupError
from .poset import BudgetExceeded
from .presets import PRESETS, ConfigError, RunConfig, run_group_spec, run_preset
from .report import emit_report

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nilcoset", description="Coset posets of nilpotent subgroups: verification presets.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS), help="named verification pipeline")
    src.add_argument("--group-spec", type=Path, metavar="FILE", help="JSON group description")
    src.add_argument("--list", action="store_true", help="list presets and exit")
    ap.add_argument("--q", type=int, default=2, help="family N_{q+1}: subgroups of class <= q (group-spec only)")
    ap.add_argument("--coefficients", type=int, default=0, help="also compute H_*(-; Z/e); 0 = integers only")
    ap.add_argument("--max-dim", type=int, default=None, help="truncate the order complex at this dimension")
    ap.add_argument("--budget", type=int, default=None, help="elementary evaluations per sweep before sampling")
    ap.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    ap.add_argument("--format", choices=("json", "table"), default="table")
    ap.add_argument("--export-matrices", type=Path, default=None, metavar="DIR", help="write d<k>.smat boundary files")
    ap.add_argument("-o", "--output", type=Path, default=None, help="write the report here instead of stdout")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.list:
        for name, fn in PRESETS.items():
            print(f"{name:22} {(fn.__doc__ or '').strip()}")
        return EXIT_OK
    cfg = RunConfig(
        seed=args.seed,
        coefficients=args.coefficients,
        max_dim=args.max_dim,
        q=args.q,
        export_dir=args.export_matrices,
    )
    if args.budget is not None:
        cfg.budget = args.budget
    if cfg.coefficients < 0 or (cfg.max_dim is not None and cfg.max_dim < 1):
        print("error: --coefficients must be >= 0 and --max-dim >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.preset:
            report = run_preset(args.preset, cfg)
        else:
            report = run_group_spec(args.group_spec, cfg).normalized()
    except (ConfigError, BudgetExceeded, GroupError, FileNotFoundError, MemoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    text = emit_report(report, args.format)
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
