"""Run every preset and write one JSON report per preset.

    python scripts/run_all_presets.py --out results/ [--skip-slow]
"""

import argparse
import sys
import time
from pathlib import Path

from nilcoset.presets import PRESETS, RunConfig, run_preset

SLOW = {"u4-f2-direct"}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--skip-slow", action="store_true", help="skip u4-f2-direct (about half a minute)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    failed = []
    for name in PRESETS:
        if args.skip_slow and name in SLOW:
            print(f"{name:22} skipped")
            continue
        t = time.perf_counter()
        rep = run_preset(name, RunConfig(seed=args.seed))
        (args.out / f"{name}.json").write_text(rep.to_json() + "\n")
        verdict = "PASS" if rep.ok else "FAIL"
        print(f"{name:22} {verdict}  {len(rep.checks):3d} checks  {time.perf_counter() - t:7.2f}s")
        if not rep.ok:
            failed.append(name)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
