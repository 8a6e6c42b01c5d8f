"""Run both counterexample pipelines over several seeds and print a short table.

Johnstone's dcpo: decompose a sampled theta + r*mu and refute a dominated
discrete family with one u_k open.  Sorgenfrey line: for U = [0,1[ and
r = 1/2, build a small open around random finite families inside Box U.
"""

from __future__ import annotations

import argparse
from fractions import Fraction

from valsep.johnstone import MU, decompose_johnstone, escape_falsifier
from valsep.sampling import dominated_family, random_smyth_inside, random_theta, rng_of
from valsep.smyth import refute_point_continuity
from valsep.sorgenfrey import interval
from valsep.valuation import black_box


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--families", type=int, default=20, help="random A families per seed")
    args = ap.parse_args()
    U, r_pc = interval(0, 1), Fraction(1, 2)
    print(f"{'seed':>4}  {'|theta|':>7}  {'r':>5}  {'k':>3}  {'gap':>6}  {'max bound':>9}")
    for seed in range(args.seeds):
        rng = rng_of(seed)
        theta = random_theta(rng, rng.randint(1, 8))
        r = Fraction(rng.randint(1, 4), 4)
        got, got_r = decompose_johnstone(black_box(theta + r * MU), theta.support)
        assert got.as_dict() == theta.as_dict() and got_r == r
        esc = escape_falsifier(got, got_r, dominated_family(rng, theta, r))
        bounds = []
        for _ in range(args.families):
            A = [random_smyth_inside(rng, U) for _ in range(rng.randint(1, 5))]
            bounds.append(refute_point_continuity(U, r_pc, A).bound)
        print(f"{seed:>4}  {len(theta.terms):>7}  {str(r):>5}  {esc.k:>3}  {str(esc.gap):>6}  "
              f"{str(max(bounds)):>9}")


if __name__ == "__main__":
    main()
