"""Simplex counts and m(r) for the reduced Burnside complexes, r = 3..R."""

import argparse

from nilcoset.linear import burnside_counts, burnside_m_closed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rmax", type=int, default=8)
    args = ap.parse_args()
    print(f"{'r':>2} {'n0':>12} {'n1':>14} {'n2':>14} {'chi':>14} {'m(r)':>14}  closed form")
    for r in range(3, args.rmax + 1):
        c = burnside_counts(r)
        m = burnside_m_closed(r)
        print(f"{r:>2} {c.n0:>12} {c.n1:>14} {c.n2:>14} {c.chi:>14} {c.m:>14}  {'ok' if m == c.m else m}")


if __name__ == "__main__":
    main()
