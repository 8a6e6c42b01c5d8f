"""Exhaustive Fubini check on products of small posets, without a time cap.

Walks the same enumeration as the acceptance test (factor isomorphism
classes, every monotone map into a 3-chain, 100 seeded valuation pairs per
product) and reports progress per product.  The full run is very long;
``--max-points`` and ``--pairs`` shrink it.
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from valsep.integration import count_level_maps, fubini_check, monotone_level_maps
from valsep.poset import posets_up_to_iso, product_poset
from valsep.sampling import positive, random_simple, rng_of


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-points", type=int, default=4)
    ap.add_argument("--pairs", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1010)
    args = ap.parse_args()
    catalog = [P for n in range(1, args.max_points + 1) for P in posets_up_to_iso(n)]
    pairs = [(P, Q) for i, P in enumerate(catalog) for Q in catalog[i:]]
    rng = rng_of(args.seed)
    start = time.perf_counter()
    checks = unequal = 0
    for idx, (P, Q) in enumerate(pairs):
        R = product_poset(P, Q)
        vals = [(random_simple(rng, P), random_simple(rng, Q)) for _ in range(args.pairs)]
        a = positive(rng, 2)
        levels = [Fraction(0), a, a + positive(rng, 2)]
        for h in monotone_level_maps(R, levels):
            for nu, xi in vals:
                unequal += not fubini_check(h, nu, xi, P, Q).equal
                checks += 1
        print(f"product {idx + 1}/{len(pairs)} ({len(P)}x{len(Q)}, {count_level_maps(R)} maps): "
              f"{checks} checks, {unequal} unequal, {time.perf_counter() - start:.1f}s", flush=True)
    print(f"done: {checks} checks, {unequal} unequal")


if __name__ == "__main__":
    main()
