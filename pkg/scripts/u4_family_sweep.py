"""Reduced complexes C(I, F_p^3) for U4(F_p), against p^2(p-1)^3 circles and (p-1)^3 spheres.

Uses the closed-form trilinear form only (no group table), so larger p
are cheap until the boundary matrices get big.
"""

import argparse
import time

from nilcoset.catalog import elementary_abelian
from nilcoset.families import SubgroupFamily
from nilcoset.linear import closed_form_u4_tensor, isotropic_family_u4
from nilcoset.poset import build_coset_poset, euler_characteristic, order_complex


def expected(p):
    if p == 2:
        return [0, 0, 3]
    return [0, p * p * (p - 1) ** 3, (p - 1) ** 3]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("primes", nargs="*", type=int, default=[2, 3, 5])
    args = ap.parse_args()
    print(f"{'p':>2} {'|I|':>5} {'nodes':>6} {'counts':>24} {'chi':>7} {'reduced betti':>18} {'expected':>18} {'s':>6}")
    for p in args.primes:
        t = time.perf_counter()
        V = elementary_abelian(p, 3)
        iso = isotropic_family_u4(p, closed_form_u4_tensor(p))
        fam = SubgroupFamily(V, 2, [U.to_subgroup(V) for U in iso])
        poset = build_coset_poset(V, fam)
        cx = order_complex(poset, 3)
        red = cx.homology().reduced_betti()
        chi, _ = euler_characteristic(poset)
        ok = "" if red == expected(p) else "  MISMATCH"
        print(f"{p:>2} {len(iso):>5} {poset.n_nodes:>6} {str(cx.counts):>24} {chi:>7} {str(red):>18} "
              f"{str(expected(p)):>18} {time.perf_counter() - t:6.1f}{ok}")


if __name__ == "__main__":
    main()
