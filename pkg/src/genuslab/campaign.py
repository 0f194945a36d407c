"""Sampling campaigns: sample, measure, aggregate, write CSV/NDJSON/JSON."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from statistics import NormalDist

from . import __version__
from .counting import VARIANTS
from .geometry import CSV_HEADER, METRICS, analyze, is_inf
from .maps import serialize
from .rng import RNG_NAME, make_rng
from .sampler import MCMC_CAVEAT, ConfigError, SamplerSpec, sample
from .unicellular import SamplerBudgetError


@dataclass
class CampaignConfig:
    pairs: list[tuple[int, int]] = field(default_factory=list)
    theta: float | None = None
    ns: list[int] = field(default_factory=list)
    method: str = "exact"
    samples: int = 100
    metrics: list[str] = field(default_factory=lambda: ["pr", "two-cycles", "ct", "diameter"])
    seed: int = 0
    search_cap: int = 6
    attempt_budget: int = 10**7
    mcmc_steps: int = 10**4
    variant: str = "corrected"
    workers: int | None = None
    out_csv: str | None = None
    out_json: str | None = None
    out_ndjson: str | None = None

    def __post_init__(self):
        self.pairs = [tuple(p) for p in self.pairs]
        if self.theta is not None:
            if not 0 < self.theta < 0.5:
                raise ConfigError(f"theta must lie in (0, 1/2), got {self.theta}")
            if not self.ns:
                raise ConfigError("theta-driven campaigns need a list of n")
            self.pairs = [(n, round(self.theta * n)) for n in self.ns]
        if not self.pairs:
            raise ConfigError("no (n, g) pairs given")
        for n, g in self.pairs:
            SamplerSpec(n, g, self.method, self.seed, self.attempt_budget, self.mcmc_steps)
            if self.theta is not None and not 0 < g / n < 0.5:
                raise ConfigError(f"g/n = {g}/{n} outside (0, 1/2)")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        bad = set(self.metrics) - set(METRICS)
        if bad:
            raise ConfigError(f"unknown metrics {sorted(bad)}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be positive")
        for path in (self.out_csv, self.out_json, self.out_ndjson):
            if path is not None:
                parent = Path(path).resolve().parent
                if not parent.is_dir() or not os.access(parent, os.W_OK):
                    raise ConfigError(f"cannot write to {path}")

    @classmethod
    def from_json(cls, obj: dict) -> "CampaignConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(obj) - known
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        return cls(**obj)

    def spec(self, n: int, g: int) -> SamplerSpec:
        return SamplerSpec(n, g, self.method, self.seed, self.attempt_budget, self.mcmc_steps)


def worker_count(requested: int | None = None) -> int:
    """Requested count (default: CPU count) capped by ``GENUSLAB_WORKERS``."""
    count = requested or os.cpu_count() or 1
    cap = os.environ.get("GENUSLAB_WORKERS")
    if cap is not None:
        try:
            cap_value = int(cap)
        except ValueError:
            raise ConfigError(f"GENUSLAB_WORKERS must be a positive integer, got {cap!r}") from None
        if cap_value < 1:
            raise ConfigError(f"GENUSLAB_WORKERS must be a positive integer, got {cap!r}")
        count = min(count, cap_value)
    return max(1, count)


def _task(args):
    config, pair_index, sample_index = args
    n, g = config.pairs[pair_index]
    rng = make_rng(config.seed, pair_index, sample_index)
    try:
        m = sample(config.spec(n, g), rng)
    except SamplerBudgetError as exc:
        return pair_index, sample_index, None, None, str(exc)
    rep = analyze(m, config.metrics, config.search_cap)
    return pair_index, sample_index, serialize(m), rep, None


@dataclass
class RunRecord:
    config: dict
    seed: int
    version: str
    rows: list[list[str]]
    maps: list[str]
    summary: list[dict]
    wall_clock: float = 0.0

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(self.rows)
        return buf.getvalue()

    def ndjson_text(self) -> str:
        return "".join(line + "\n" for line in self.maps)

    def summary_json(self) -> dict:
        return {
            "version": self.version,
            "rng": RNG_NAME,
            "seed": self.seed,
            "config": self.config,
            "summary": self.summary,
            "wall_clock_seconds": round(self.wall_clock, 3),
        }


Z99 = NormalDist().inv_cdf(0.995)


def wilson_interval(successes: int, trials: int, z: float = Z99) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def _quantiles(values: list[float]) -> dict:
    if not values:
        return {}
    s = sorted(values)

    def q(p):
        k = (len(s) - 1) * p
        lo, hi = math.floor(k), math.ceil(k)
        return s[lo] + (s[hi] - s[lo]) * (k - lo)

    return {"q10": q(0.1), "median": q(0.5), "q90": q(0.9)}


def summarize(n: int, g: int, reports: list, method: str) -> dict:
    out: dict = {"n": n, "g": g, "method": method, "count": len(reports)}
    if method == "mcmc":
        out["caveat"] = MCMC_CAVEAT
    xs = [r.x_nonsep_2cycles for r in reports if r.x_nonsep_2cycles is not None]
    if xs:
        k = len(xs)
        m1 = sum(xs) / k
        m2 = sum(x * x for x in xs) / k
        hits = sum(1 for x in xs if x > 0)
        p_hat = hits / k
        out.update(
            mean_x=m1,
            mean_x2=m2,
            second_moment_ratio=(m1 * m1 / m2) if m2 else 0.0,
            p_x_positive=p_hat,
            p_x_positive_se=math.sqrt(p_hat * (1 - p_hat) / k),
            p_x_positive_wilson99=list(wilson_interval(hits, k)),
        )
    log_n = math.log(n) if n > 1 else float("nan")
    prs = [r.planarity_radius for r in reports if r.planarity_radius is not None and not is_inf(r.planarity_radius)]
    if prs:
        out["pr"] = _quantiles(prs)
        out["pr_over_log_n"] = _quantiles([p / log_n for p in prs])
    cts = [r.ct_upper for r in reports if r.ct_upper is not None and not is_inf(r.ct_upper) and "ct-search-capped" not in r.flags]
    if cts:
        out["ct"] = _quantiles(cts)
        out["ct_over_log_n"] = _quantiles([c / log_n for c in cts])
    diams = [r.diameter for r in reports if r.diameter is not None]
    if diams:
        out["diameter"] = _quantiles(diams)
    return out


def run_campaign(config: CampaignConfig, workers: int | None = None) -> RunRecord:
    """Sample and measure every (pair, sample) task; rows ordered by (pair, sample)."""
    start = time.perf_counter()
    tasks = [(config, i, j) for i in range(len(config.pairs)) for j in range(config.samples)]
    count = worker_count(workers or config.workers)
    if count > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=count) as pool:
            results = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * count))))
    else:
        results = [_task(t) for t in tasks]
    results.sort(key=lambda r: (r[0], r[1]))
    rows, maps, summary = [], [], []
    by_pair: dict[int, list] = {i: [] for i in range(len(config.pairs))}
    errors: dict[int, str] = {}
    for pair_index, sample_index, text, rep, err in results:
        if err is not None:
            errors.setdefault(pair_index, err)
            continue
        by_pair[pair_index].append(rep)
        rows.append(rep.row(len(rows)))
        obj = json.loads(text)
        obj.update(pair_index=pair_index, sample_index=sample_index, method=config.method, variant=config.variant)
        maps.append(json.dumps(obj, separators=(", ", ": ")))
    for i, (n, g) in enumerate(config.pairs):
        s = summarize(n, g, by_pair[i], config.method)
        if i in errors:
            s["error"] = errors[i]
        summary.append(s)
    cfg = asdict(config)
    record = RunRecord(cfg, config.seed, __version__, rows, maps, summary, time.perf_counter() - start)
    _write(config, record)
    return record


def _write(config: CampaignConfig, record: RunRecord) -> None:
    if config.out_csv:
        Path(config.out_csv).write_text(record.csv_text())
    if config.out_ndjson:
        Path(config.out_ndjson).write_text(record.ndjson_text())
    if config.out_json:
        Path(config.out_json).write_text(json.dumps(record.summary_json(), indent=2) + "\n")
