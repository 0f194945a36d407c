"""Planarity radius and smallest cycle with tail against log n at fixed genus."""

import argparse
import math
from statistics import median

from genuslab.geometry import cycle_with_tail_min, is_inf, planarity_radius
from genuslab.rng import make_rng
from genuslab.sampler import SamplerSpec, sample_exact


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--g", type=int, default=2)
    p.add_argument("--ns", type=int, nargs="+", default=[10, 20, 40, 80, 160])
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--search-cap", type=int, default=8)
    args = p.parse_args()

    print("n     median_PR  PR/ln n  median_ct  ct/ln n  capped")
    for n in args.ns:
        prs, cts, capped = [], [], 0
        for j in range(args.samples):
            m = sample_exact(SamplerSpec(n, args.g), make_rng(args.seed, n, j))
            pr = planarity_radius(m)
            _, ct, _, exact = cycle_with_tail_min(m, args.search_cap, pr)
            prs.append(pr)
            if exact and not is_inf(ct):
                cts.append(ct)
            else:
                capped += 1
        mp = median(prs)
        mc = median(cts) if cts else float("nan")
        print(f"{n:<5} {mp:<10} {mp / math.log(n):<8.3f} {mc:<10} {mc / math.log(n):<8.3f} {capped}")


if __name__ == "__main__":
    main()
