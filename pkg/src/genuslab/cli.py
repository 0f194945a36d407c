"""Command line entry point ``genuslab``.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .campaign import CampaignConfig, run_campaign, worker_count
from .counting import VARIANTS, cc_table
from .geometry import CSV_HEADER, METRICS, analyze, two_cycle_census, vertex_disjoint_pairs
from .maps import MapValidationError, read_ndjson, serialize
from .oracle import OracleLimitError, enumerate_quadrangulations
from .rng import make_rng
from .sampler import METHODS, ConfigError, SamplerSpec, sample
from .unicellular import SamplerBudgetError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _write_lines(path: str | None, lines: list[str]) -> None:
    text = "".join(line + "\n" for line in lines)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_enumerate(args) -> int:
    if args.n_max < 0 or args.g_max < 0:
        raise ConfigError("bounds must be non-negative")
    table = cc_table(args.n_max, args.g_max, args.variant)
    text = json.dumps(table.to_json(), indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if table.inexact:
        print(f"non-exact division at {table.inexact[:5]} ({args.variant} variant)", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_sample(args) -> int:
    spec = SamplerSpec(args.n, args.g, args.method, args.seed, args.attempt_budget, args.mcmc_steps)
    if args.count < 1:
        raise ConfigError("count must be >= 1")
    lines = []
    for i in range(args.count):
        m = sample(spec, make_rng(args.seed, i))
        extra = {"n": args.n, "g": args.g, "method": args.method, "sample_index": i}
        if args.method == "mcmc":
            extra["caveat"] = "subject to mixing assumptions"
        lines.append(serialize(m, **extra))
    _write_lines(args.out, lines)
    return EXIT_OK


def cmd_oracle(args) -> int:
    result = enumerate_quadrangulations(args.n, args.g)
    lines = []
    for m in result.maps:
        census = two_cycle_census(m) if m.dart_count else None
        lines.append(
            serialize(
                m,
                n=args.n,
                g=m.genus,
                x_nonsep_2cycles=census.nonseparating if census else 0,
                vertex_disjoint_pairs=vertex_disjoint_pairs(m) if m.dart_count else 0,
            )
        )
    _write_lines(args.out, lines)
    print(f"{len(result)} maps", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args) -> int:
    metrics = [x.strip() for x in args.metrics.split(",") if x.strip()]
    bad = set(metrics) - set(METRICS)
    if bad:
        raise ConfigError(f"unknown metrics {sorted(bad)}")
    if args.search_cap < 1:
        raise ConfigError("search cap must be >= 1")
    rows = []
    for index, (m, _) in enumerate(read_ndjson(args.input)):
        rows.append(analyze(m, metrics, args.search_cap).row(index))
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_campaign(args) -> int:
    try:
        obj = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    config = CampaignConfig.from_json(obj)
    record = run_campaign(config, worker_count(args.workers or config.workers))
    for s in record.summary:
        if "error" in s:
            print(f"({s['n']},{s['g']}): {s['error']}", file=sys.stderr)
    if not (config.out_csv or config.out_json):
        json.dump(record.summary_json(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import verify_suite

    only = [int(x) for x in args.only.split(",")] if args.only else None
    failed = False
    for result in verify_suite(args.level, args.variant, only):
        print(result.line(), flush=True)
        if not result.passed:
            failed = True
            if result.counterexample:
                print(f"  counterexample: {result.counterexample}")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genuslab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="count table Q(n, g)")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--g-max", type=int, required=True)
    p.add_argument("--variant", choices=VARIANTS, default="corrected")
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sample", help="draw quadrangulations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="exact")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempt-budget", type=int, default=10**7)
    p.add_argument("--mcmc-steps", type=int, default=10**4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("oracle", help="exhaustive list of small quadrangulations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--g", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("analyze", help="geometric statistics of maps in an NDJSON file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--metrics", default=",".join(METRICS))
    p.add_argument("--search-cap", type=int, default=6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("campaign", help="run a sampling campaign from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("verify", help="acceptance checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.add_argument("--variant", choices=VARIANTS, default="corrected")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        worker_count()
        return args.func(args)
    except (ConfigError, OracleLimitError, MapValidationError, FileNotFoundError, ValueError) as exc:
        print(f"genuslab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SamplerBudgetError as exc:
        print(f"genuslab: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
