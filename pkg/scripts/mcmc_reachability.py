"""Communicating classes of the 2-cycle chain on oracle-sized lists, and a mixing check."""

import argparse
from collections import Counter

from genuslab.oracle import enumerate_quadrangulations
from genuslab.rng import make_rng
from genuslab.sampler import SamplerSpec, TwoCycleChain, move_components, sample_exact


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--steps", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    for n, g in [(2, 1), (3, 1), (4, 1), (4, 2)]:
        plain = [len(c) for c in move_components(n, g, reroot=False)]
        rerooted = [len(c) for c in move_components(n, g, reroot=True)]
        print(f"Q({n},{g}): classes without reroot {plain}, with reroot {rerooted}")

    states = enumerate_quadrangulations(3, 1).codes
    chain = TwoCycleChain(sample_exact(SamplerSpec(3, 1), make_rng(args.seed)), make_rng(args.seed, 1))
    chain.run(args.steps, record=True)
    counts = Counter(chain.log.states)
    tv = 0.5 * sum(abs(counts[c] / args.steps - 1 / len(states)) for c in states)
    log = chain.log
    print(
        f"(3,1) after {args.steps} steps: total variation {tv:.4f}, "
        f"accepted {log.accepted}, rerooted {log.rerooted}, held {log.held_no_move}"
    )


if __name__ == "__main__":
    main()
