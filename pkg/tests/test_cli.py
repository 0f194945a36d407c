import json
import subprocess
import sys

import pytest

from genuslab.cli import main
from genuslab.maps import fixture_f2, read_ndjson, serialize


def test_enumerate(tmp_path, capsys):
    out = tmp_path / "table.json"
    assert main(["enumerate", "--n-max", "4", "--g-max", "2", "--out", str(out)]) == 0
    table = json.loads(out.read_text())
    assert table["counts"][4][2] == "21" and table["variant"] == "corrected"


def test_enumerate_printed_flags_inexact(capsys):
    assert main(["enumerate", "--n-max", "4", "--g-max", "2", "--variant", "printed"]) == 1
    assert "non-exact" in capsys.readouterr().err


def test_enumerate_bad_bounds():
    assert main(["enumerate", "--n-max", "-1", "--g-max", "1"]) == 2


def test_sample_and_analyze(tmp_path):
    maps = tmp_path / "maps.ndjson"
    assert main(["sample", "--n", "8", "--g", "1", "--count", "3", "--seed", "4", "--out", str(maps)]) == 0
    read = read_ndjson(maps)
    assert len(read) == 3 and all(m.genus == 1 for m, _ in read)
    assert [extra["sample_index"] for _, extra in read] == [0, 1, 2]
    stats = tmp_path / "stats.csv"
    assert main(["analyze", "--in", str(maps), "--metrics", "pr,two-cycles", "--out", str(stats)]) == 0
    lines = stats.read_text().splitlines()
    assert lines[0].startswith("map_index,n,g,pr") and len(lines) == 4


def test_sample_mcmc_caveat(tmp_path):
    out = tmp_path / "m.ndjson"
    assert main(["sample", "--n", "4", "--g", "1", "--method", "mcmc", "--mcmc-steps", "50", "--out", str(out)]) == 0
    assert "mixing" in out.read_text()


def test_sample_config_errors():
    assert main(["sample", "--n", "2", "--g", "3"]) == 2
    assert main(["sample", "--n", "6", "--g", "1", "--count", "0"]) == 2
    assert main(["sample", "--n", "9", "--g", "1", "--method", "exhaustive"]) == 2


def test_sample_budget_failure():
    assert main(["sample", "--n", "40", "--g", "9", "--attempt-budget", "1"]) == 1


def test_oracle(tmp_path):
    out = tmp_path / "list.ndjson"
    assert main(["oracle", "--n", "2", "--g", "1", "--out", str(out)]) == 0
    ((m, extra),) = read_ndjson(out)
    assert m.code == fixture_f2().code
    assert extra["x_nonsep_2cycles"] == 6
    assert main(["oracle", "--n", "7"]) == 2


def test_analyze_bad_input(tmp_path):
    bad = tmp_path / "bad.ndjson"
    bad.write_text('{"dart_count": 3}\n')
    assert main(["analyze", "--in", str(bad)]) == 2
    assert main(["analyze", "--in", str(tmp_path / "missing.ndjson")]) == 2
    good = tmp_path / "good.ndjson"
    good.write_text(serialize(fixture_f2()) + "\n")
    assert main(["analyze", "--in", str(good), "--metrics", "volume"]) == 2


def test_campaign(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"pairs": [[2, 1]], "method": "exhaustive", "samples": 3, "metrics": ["two-cycles"]}))
    assert main(["campaign", "--config", str(cfg), "--workers", "1"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["summary"][0]["mean_x"] == 6
    cfg.write_text(json.dumps({"pairs": [[2, 1]], "unknown": 1}))
    assert main(["campaign", "--config", str(cfg)]) == 2
    cfg.write_text("{broken")
    assert main(["campaign", "--config", str(cfg)]) == 2


def test_worker_env_validated(monkeypatch):
    monkeypatch.setenv("GENUSLAB_WORKERS", "zero")
    assert main(["enumerate", "--n-max", "2", "--g-max", "1"]) == 2


def test_verify_fast_subset(capsys):
    assert main(["verify", "--level", "fast", "--only", "1,2"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 2


def test_verify_injected_fault(capsys):
    assert main(["verify", "--level", "fast", "--only", "1", "--variant", "printed"]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "genuslab.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for sub in ("enumerate", "sample", "oracle", "analyze", "campaign", "verify"):
        assert sub in res.stdout


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
