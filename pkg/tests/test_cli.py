import json

import pytest

from levy_exits.cli import EXIT_CONTRADICTION, EXIT_OK, EXIT_USAGE, build_parser, run_cli_with_args
from levy_exits.config import Defaults
from levy_exits.estimator import wilson_interval

from .conftest import MA_DOCUMENT

SCENARIOS = """\
schema: levy-exits/1
scenarios:
  - name: ma
    model:
      measure: {atoms: [{x: -2.0, rate: 1.0}]}
      drift: {gamma0: 1.0}
    queries:
      - {a: 1.0, b: 1.0, m: 1.0, M: inf}
      - {a: 1.0, b: 1.0, m: 0.0, M: 2.0}
    campaign: {paths: 1000, seed: 5}
"""

SUBORDINATOR = """\
schema: levy-exits/1
scenarios:
  - name: tempered-subordinator
    model:
      measure: {power_law: {pos: {c: 1.0, alpha: 0.5, theta: 1.0}}}
      drift: {gamma0: 0.0}
    queries:
      - {a: 1.0, b: 1.0}
    campaign: {paths: 100}
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenarios.yaml"
    path.write_text(SCENARIOS)
    return path


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_CONTRADICTION, EXIT_USAGE}) == 3


def test_classify(ma_file, capsys):
    assert run_cli_with_args(["classify", str(ma_file)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "proper=true before=false after=false full=false confinable=false" in out
    assert "not-monotone" in out


def test_classify_brownian(tmp_path, capsys):
    path = tmp_path / "bm.yaml"
    path.write_text("schema: levy-exits/1\nmodel: {sigma2: 1.0}\n")
    assert run_cli_with_args(["classify", str(path)]) == EXIT_OK
    assert "proper=true before=true after=true full=true confinable=true" in capsys.readouterr().out


def test_classify_reports_field_errors(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text(MA_DOCUMENT.replace("rate: 1.0", "rate: -1.0"))
    assert run_cli_with_args(["classify", str(path)]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "line 5" in err
    assert "model.measure.atoms" in err


def test_missing_file(tmp_path):
    assert run_cli_with_args(["classify", str(tmp_path / "absent.yaml")]) == EXIT_USAGE


def test_decide(ma_file, capsys):
    argv = ["decide", str(ma_file), "--a", "1", "--b", "1", "--m", "0.5", "--M", "1.5"]
    assert run_cli_with_args(argv) == EXIT_OK
    assert "unknown (unknown.gap)" in capsys.readouterr().out


def test_decide_invalid_window(ma_file):
    argv = ["decide", str(ma_file), "--a", "1", "--b", "1", "--m", "2", "--M", "1"]
    assert run_cli_with_args(argv) == EXIT_USAGE


def test_catalog(capsys):
    assert run_cli_with_args(["catalog"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Witness models" in out
    for name in ("ma-reference", "symmetric-jumps", "symmetric-stable"):
        assert f"  {name}: " in out


def test_estimate_with_trace(scenario_file, tmp_path, capsys):
    trace = tmp_path / "trace.tsv"
    argv = ["estimate", str(scenario_file), "--paths", "200", "--workers", "1", "--trace", str(trace)]
    assert run_cli_with_args(argv) == EXIT_OK
    lines = trace.read_text().splitlines()
    assert lines[0].startswith("# ma a=1.0 b=1.0")
    assert lines[1] == "0.0\t0.0"
    assert sum(line.startswith("#") for line in lines) == 2


def test_verify_writes_identical_reports(scenario_file, tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    assert run_cli_with_args(["verify", str(scenario_file), "--workers", "1", "--out", str(first)]) == EXIT_OK
    assert run_cli_with_args(["verify", str(scenario_file), "--workers", "2", "--out", str(second)]) == EXIT_OK
    for name in ("cross-check.tsv", "cross-check.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_verify_single_format(scenario_file, tmp_path):
    argv = ["verify", str(scenario_file), "--workers", "1", "--out", str(tmp_path), "--format", "table"]
    assert run_cli_with_args(argv) == EXIT_OK
    assert (tmp_path / "cross-check.tsv").exists()
    assert not (tmp_path / "cross-check.json").exists()


def test_verify_scheme_mismatch(tmp_path, capsys):
    path = tmp_path / "subordinator.yaml"
    path.write_text(SUBORDINATOR)
    assert run_cli_with_args(["verify", str(path), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "Zero verdict" in capsys.readouterr().err


def test_verify_needs_a_source():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify"])


@pytest.mark.slow
def test_verify_builtin_is_consistent_and_reproducible(tmp_path):
    first, second = tmp_path / "first", tmp_path / "second"
    assert run_cli_with_args(["verify", "--builtin", "--out", str(first)]) == EXIT_OK
    assert run_cli_with_args(["verify", "--builtin", "--out", str(second)]) == EXIT_OK
    assert (first / "cross-check.tsv").read_bytes() == (second / "cross-check.tsv").read_bytes()


def test_verify_uses_campaign_alpha(tmp_path):
    path = tmp_path / "strict.yaml"
    path.write_text(SCENARIOS.replace("seed: 5}", "seed: 5, alpha: 0.01}"))
    assert run_cli_with_args(["verify", str(path), "--workers", "1", "--out", str(tmp_path)]) == EXIT_OK
    row = json.loads((tmp_path / "cross-check.json").read_text())["rows"][0]
    assert row["alpha"] == 0.01
    lo, hi = wilson_interval(row["hits_up"], 1000, 0.99)
    assert row["ci_up_lo"] == pytest.approx(lo)
    assert row["ci_up_hi"] == pytest.approx(hi)
    assert hi - lo > wilson_interval(row["hits_up"], 1000)[1] - wilson_interval(row["hits_up"], 1000)[0]


def test_alpha_flag_overrides_scenario(scenario_file, tmp_path, capsys):
    argv = ["estimate", str(scenario_file), "--paths", "200", "--workers", "1", "--alpha", "0.01"]
    assert run_cli_with_args(argv) == EXIT_OK
    assert "99% Wilson interval" in capsys.readouterr().out


def test_alpha_flag_range(scenario_file, tmp_path, capsys):
    argv = ["verify", str(scenario_file), "--out", str(tmp_path), "--alpha", "2"]
    assert run_cli_with_args(argv) == EXIT_USAGE
    assert "--alpha must lie in (0, 1)" in capsys.readouterr().err


def test_conflicting_scenario_seeds_warn(tmp_path, capsys):
    second = SCENARIOS.split("scenarios:\n", 1)[1].replace("name: ma", "name: later").replace("seed: 5", "seed: 9")
    path = tmp_path / "two.yaml"
    path.write_text(SCENARIOS + second)
    argv = ["estimate", str(path), "--paths", "100", "--workers", "1"]
    assert run_cli_with_args(argv) == EXIT_OK
    err = capsys.readouterr().err
    assert "ignoring seed 9 of scenario later" in err
    assert "using seed 5" in err


def test_seed_flag_silences_scenario_seeds(tmp_path, capsys):
    second = SCENARIOS.split("scenarios:\n", 1)[1].replace("name: ma", "name: later").replace("seed: 5", "seed: 9")
    path = tmp_path / "two.yaml"
    path.write_text(SCENARIOS + second)
    argv = ["estimate", str(path), "--paths", "100", "--workers", "1", "--seed", "3"]
    assert run_cli_with_args(argv) == EXIT_OK
    assert "ignoring seed" not in capsys.readouterr().err


def test_config_save(tmp_path, capsys):
    assert run_cli_with_args(["config", "--save", "--dir", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "max_jump_rate" in out
    assert "Config saved to" in out
    saved = json.loads((tmp_path / "config.json").read_text())
    assert set(saved) == {"paths", "alpha", "dt", "horizon", "seed", "workers", "shard_size", "max_jump_rate"}
    assert Defaults.load(tmp_path).alpha == saved["alpha"]
