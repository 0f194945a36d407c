"""Short nonseparating 2-cycles along a fixed genus ratio.

Runs a campaign from a JSON config (see configs/) and prints, per (n, g),
the estimate of P(X > 0), its 99% Wilson interval and the second-moment
lower bound E(X)^2 / E(X^2).
"""

import argparse
import json
from pathlib import Path

from genuslab.campaign import CampaignConfig, run_campaign, worker_count


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("config", type=Path)
    p.add_argument("--workers", type=int)
    args = p.parse_args()

    cfg = CampaignConfig.from_json(json.loads(args.config.read_text()))
    record = run_campaign(cfg, worker_count(args.workers or cfg.workers))
    print("n    g    samples  mean_X   P(X>0)  wilson99          E(X)^2/E(X^2)")
    for s in record.summary:
        if "error" in s:
            print(f"{s['n']:<4} {s['g']:<4} error: {s['error']}")
            continue
        lo, hi = s["p_x_positive_wilson99"]
        print(
            f"{s['n']:<4} {s['g']:<4} {s['count']:<8} {s['mean_x']:<8.3f} {s['p_x_positive']:<7.3f} "
            f"[{lo:.3f}, {hi:.3f}]    {s['second_moment_ratio']:.3f}"
        )
    print(f"wall clock {record.wall_clock:.1f}s")


if __name__ == "__main__":
    main()
