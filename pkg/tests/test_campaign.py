import json
import math

import pytest

from genuslab.campaign import CampaignConfig, run_campaign, summarize, wilson_interval, worker_count
from genuslab.geometry import CSV_HEADER, two_cycle_census
from genuslab.oracle import enumerate_quadrangulations
from genuslab.sampler import ConfigError


def test_tiny_exhaustive_campaign(tmp_path):
    cfg = CampaignConfig(
        pairs=[(2, 1)],
        method="exhaustive",
        samples=20,
        metrics=["two-cycles"],
        out_csv=str(tmp_path / "rows.csv"),
        out_json=str(tmp_path / "summary.json"),
    )
    record = run_campaign(cfg, workers=1)
    (s,) = record.summary
    assert s["mean_x"] == 6 and s["p_x_positive"] == 1
    lines = (tmp_path / "rows.csv").read_text().splitlines()
    assert lines[0].split(",") == CSV_HEADER and len(lines) == 21
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["config"]["method"] == "exhaustive"
    assert summary["config"]["variant"] == "corrected"
    assert summary["rng"] and summary["version"]


def test_second_moment_bound():
    cfg = CampaignConfig(pairs=[(12, 2), (20, 4)], samples=150, metrics=["two-cycles"], seed=3)
    for s in run_campaign(cfg, workers=1).summary:
        assert s["second_moment_ratio"] <= s["p_x_positive"] + 3 * s["p_x_positive_se"]


@pytest.mark.parametrize("n,g", [(3, 1), (4, 1), (4, 2)])
def test_mean_x_matches_oracle_ratio(n, g):
    maps = enumerate_quadrangulations(n, g).maps
    xs = [two_cycle_census(m).nonseparating for m in maps]
    exact_mean = sum(xs) / len(xs)
    var = sum((x - exact_mean) ** 2 for x in xs) / len(xs)
    samples = 3000
    cfg = CampaignConfig(pairs=[(n, g)], samples=samples, metrics=["two-cycles"], seed=n * 10 + g)
    (s,) = run_campaign(cfg, workers=1).summary
    half = 2.576 * math.sqrt(var / samples)
    assert abs(s["mean_x"] - exact_mean) <= half + 1e-12


def test_theta_pairs():
    cfg = CampaignConfig(theta=0.2, ns=[10, 20], samples=1)
    assert cfg.pairs == [(10, 2), (20, 4)]
    with pytest.raises(ConfigError):
        CampaignConfig(theta=0.7, ns=[10])
    with pytest.raises(ConfigError):
        CampaignConfig(theta=0.2)


@pytest.mark.parametrize(
    "obj",
    [
        {},
        {"pairs": [[3, 1]], "samples": 0},
        {"pairs": [[3, 1]], "metrics": ["volume"]},
        {"pairs": [[3, 5]]},
        {"pairs": [[3, 1]], "colour": "blue"},
        {"pairs": [[3, 1]], "out_csv": "/nonexistent/dir/x.csv"},
        {"pairs": [[3, 1]], "variant": "other"},
    ],
)
def test_config_errors(obj):
    with pytest.raises(ConfigError):
        CampaignConfig.from_json(obj)


def test_worker_cap(monkeypatch):
    monkeypatch.setenv("GENUSLAB_WORKERS", "2")
    assert worker_count(8) == 2
    assert worker_count(1) == 1
    monkeypatch.setenv("GENUSLAB_WORKERS", "0")
    with pytest.raises(ConfigError):
        worker_count()
    monkeypatch.setenv("GENUSLAB_WORKERS", "many")
    with pytest.raises(ConfigError):
        worker_count()


def test_wilson_interval():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    lo, hi = wilson_interval(100, 100)
    assert hi == pytest.approx(1.0) and 0.9 < lo < 1.0
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_summary_quantiles():
    class Rep:
        def __init__(self, x, pr):
            self.x_nonsep_2cycles = x
            self.planarity_radius = pr
            self.ct_upper = None
            self.diameter = pr + 3
            self.flags = []

    s = summarize(10, 2, [Rep(x, x % 3) for x in range(11)], "mcmc")
    assert s["caveat"] == "subject to mixing assumptions"
    assert s["mean_x"] == 5 and s["pr"]["median"] == 1
    assert s["diameter"]["q10"] == 3


def test_reproducible_across_workers(tmp_path):
    texts = []
    for i, workers in enumerate((1, 2)):
        cfg = CampaignConfig(
            pairs=[(8, 1), (10, 2)],
            samples=6,
            seed=7,
            out_csv=str(tmp_path / f"{i}.csv"),
            out_ndjson=str(tmp_path / f"{i}.ndjson"),
        )
        run_campaign(cfg, workers=workers)
        texts.append(((tmp_path / f"{i}.csv").read_bytes(), (tmp_path / f"{i}.ndjson").read_bytes()))
    assert texts[0] == texts[1]


def test_partial_results_on_budget_error():
    # a single-vertex unicellular map always accepts, so (2,1) never needs a retry
    cfg = CampaignConfig(pairs=[(2, 1), (40, 9)], samples=2, metrics=["two-cycles"], attempt_budget=1)
    record = run_campaign(cfg, workers=1)
    assert "error" not in record.summary[0] and record.summary[0]["count"] == 2
    assert "error" in record.summary[1]
    assert len(record.rows) == 2
