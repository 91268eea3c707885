import csv
import io

import numpy as np
import pytest

from salpeter_lab import causal_shadow, evolve_massless, make_bump, sample
from salpeter_lab.cli import main
from salpeter_lab.experiment import (
    ConfigError,
    ExperimentConfig,
    format_config,
    leakage_series,
    parse_config,
    run,
)


def _rows(text):
    return list(csv.reader(line for line in io.StringIO(text) if not line.startswith("#")))


def test_config_round_trip():
    cfg = ExperimentConfig(mode="tail-survey", center=0.25, mass=2.0, times=(0.5, 1.0),
                           points=(3.0, -4.0), tolerances={"cross_path_massive": 1e-5})
    back = parse_config(format_config(cfg))
    assert back == cfg


def test_config_comments_and_blank_lines():
    cfg = parse_config("# header\n\nmode = massless-evolve  # inline\ntimes = 0, 0.5\n")
    assert cfg.mode == "massless-evolve"
    assert cfg.times == (0.0, 0.5)


@pytest.mark.parametrize("text,key", [
    ("colour = blue\n", "colour"),
    ("radius = wide\n", "radius"),
    ("tolerance.bogus = 1\n", "tolerance.bogus"),
    ("n_points = 1000\n", "n_points"),
    ("mode = warp\n", "mode"),
    ("half_length = 1.0\n", "half_length"),
    ("mode = tail-survey\nmass =\n", "mass"),
    ("times = 0, -1\n", "times"),
])
def test_config_errors_name_the_key(text, key):
    with pytest.raises(ConfigError, match=key.replace(".", r"\.")):
        parse_config(text)


def test_leakage_partition(field0, bump):
    times = [0.0, 0.1, 0.5]
    hist = [evolve_massless(field0, t) for t in times]
    recs = leakage_series(hist, [causal_shadow(bump.support, t) for t in times])
    total = field0.grid.spacing * np.sum(np.abs(field0.samples) ** 2)
    for r in recs:
        assert r.interior + r.exterior == pytest.approx(total, rel=1e-12)
    assert recs[0].fraction <= 1e-20
    assert recs[1].fraction > 1e-12
    assert recs[1].exterior < recs[2].exterior


def test_leakage_requires_matching_lengths(field0, bump):
    with pytest.raises(ValueError):
        leakage_series([field0], [])


def test_massless_run_outputs(tmp_path):
    cfg = ExperimentConfig(mode="massless-evolve", times=(0.0, 0.05, 0.1, 0.2))
    result = run(cfg, tmp_path)
    assert result.passed and result.exit_status == 0
    rows = _rows((tmp_path / "massless_leakage.csv").read_text())
    assert rows[0][0] == "t"
    data = [[float(v) for v in r] for r in rows[1:]]
    assert [r[0] for r in data] == [0.0, 0.05, 0.1, 0.2]
    exterior = [r[4] for r in data]
    assert all(a < b for a, b in zip(exterior, exterior[1:]))
    text = (tmp_path / "summary.csv").read_text()
    assert text.startswith("# salpeter-lab")
    assert "wraparound_massless_relative_amplitude" in text
    assert (tmp_path / "config.txt").read_text() == format_config(cfg)
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".staging")]


def test_run_is_deterministic(tmp_path):
    cfg = ExperimentConfig(mode="tail-survey", times=(0.5, 1.0), points=(3.0, 5.0))
    a, b = run(cfg, tmp_path / "a"), run(cfg, tmp_path / "b")
    assert a.files == b.files
    for name in a.files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cli_rejects_point_in_shadow(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    out = tmp_path / "out"
    cfg.write_text("mode = tail-survey\ntimes = 1.0\npoints = 3, 1.5\n")
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 2
    assert "1.5" in capsys.readouterr().err
    assert not out.exists()


def test_cli_impossible_tolerance_fails(tmp_path, capsys):
    cfg = tmp_path / "strict.cfg"
    cfg.write_text("mode = derivative-scan\ntolerance.reduced_form = 0\n")
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 1
    captured = capsys.readouterr()
    assert "FAIL" in captured.out
    summary = _rows((tmp_path / "o" / "summary.csv").read_text())
    assert any(r[-1] == "FAIL" for r in summary[1:])


def test_cli_missing_config_file(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_cli_run_ok(tmp_path, capsys):
    cfg = tmp_path / "ok.cfg"
    cfg.write_text(f"mode = wave-contrast\noutput_dir = {tmp_path / 'w'}\n")
    assert main(["run", "--config", str(cfg)]) == 0
    assert "pass" in capsys.readouterr().out
    assert (tmp_path / "w" / "summary.csv").exists()


def test_cli_requires_subcommand():
    with pytest.raises(SystemExit):
        main([])


def test_offcenter_profile_massive_run(tmp_path):
    cfg = ExperimentConfig(mode="massive-evolve", center=1.5, radius=0.5, amplitude=2.0,
                           mass=0.7, times=(0.0, 0.3, 0.9))
    result = run(cfg, tmp_path)
    assert result.passed
    assert sample(make_bump(1.5, 0.5, 2.0), cfg.grid()).samples.shape == (cfg.n_points,)
