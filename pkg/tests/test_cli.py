import json
import subprocess
import sys

import pytest

from d2dstream.cli import main


@pytest.fixture
def workdir(tmp_path):
    assert main(["make-trace", "-o", str(tmp_path / "cu.txt"), "--frames", "300", "--seed", "1"]) == 0
    assert main(["make-trace", "-o", str(tmp_path / "du.txt"), "--frames", "250", "--seed", "2"]) == 0
    (tmp_path / "s.toml").write_text(
        '[traces]\ncu = "cu.txt"\ndu = "du.txt"\n[output]\ndirectory = "out"\n'
    )
    return tmp_path


def test_compare_outputs(workdir, capsys):
    assert main(["compare", "--config", str(workdir / "s.toml"), "--seeds", "3"]) == 0
    out = workdir / "out"
    assert sorted(p.name for p in out.glob("slots_*.csv")) == [
        "slots_cellular.csv", "slots_dedicated.csv", "slots_reuse.csv", "slots_selection.csv"]
    assert len(list(out.glob("*.json"))) == 1
    summary = json.loads((out / "summary.json").read_text())
    assert summary["seeds"] == [0, 1, 2]
    assert "selection" in capsys.readouterr().out


def test_run_forced_reuse(workdir):
    assert main(["--quiet", "run", "--config", str(workdir / "s.toml"), "--forced-mode", "reuse",
                 "--out", str(workdir / "r")]) == 0
    summary = json.loads((workdir / "r" / "summary.json").read_text())
    (run,) = summary["runs"]["reuse"]
    assert run["mode_histogram"] == {"cellular": 0, "dedicated": 0, "reuse": 300}


def test_batch_seed_sweep(workdir):
    assert main(["--quiet", "batch", "--config", str(workdir / "s.toml"), "--seed", "5", "--seeds", "4",
                 "--out", str(workdir / "b")]) == 0
    summary = json.loads((workdir / "b" / "summary.json").read_text())
    assert summary["strategies"] == ["selection"] and summary["seeds"] == [5, 6, 7, 8]
    assert set(summary["aggregate"]["selection"]["mean_R_tot"]) == {"mean", "ci95"}


def test_zoom_flag(workdir):
    assert main(["--quiet", "run", "--config", str(workdir / "s.toml"), "--zoom", "10", "30",
                 "--out", str(workdir / "z")]) == 0
    lines = (workdir / "z" / "curves_selection.csv").read_text().splitlines()
    assert len(lines) == 1 + 2 * 21


def test_zoom_past_end_fails(workdir, capsys):
    assert main(["run", "--config", str(workdir / "s.toml"), "--zoom", "290", "400"]) == 1
    assert "exceeds" in capsys.readouterr().err


def test_validate_ok(workdir, capsys):
    assert main(["validate", "--config", str(workdir / "s.toml")]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_lists_every_violation(tmp_path, capsys):
    (tmp_path / "bad.toml").write_text(
        '[traces]\ncu = "missing_cu.txt"\ndu = "missing_du.txt"\n'
        "[radio]\np_bmax_db = inf\n[simulation]\nbuffer_factor = -1.0\nbogus = 3\n"
    )
    assert main(["validate", "--config", str(tmp_path / "bad.toml")]) == 1
    err = capsys.readouterr().err.splitlines()
    assert len(err) == 5
    joined = "\n".join(err)
    for fragment in ("missing_cu.txt", "missing_du.txt", "p_bmax_db", "buffer_factor", "bogus"):
        assert fragment in joined


def test_validate_bad_trace_contents(workdir, capsys):
    (workdir / "cu.txt").write_text("30\n12\nabc\n")
    assert main(["validate", "--config", str(workdir / "s.toml")]) == 1
    assert "line 3" in capsys.readouterr().err


def test_usage_error_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["compare"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_help_lists_flags(capsys):
    with pytest.raises(SystemExit):
        main(["compare", "--help"])
    out = capsys.readouterr().out
    for flag in ("--config", "--seeds", "--decouple-fading", "--workers", "--out", "--zoom"):
        assert flag in out


def test_module_entry_point(workdir):
    proc = subprocess.run([sys.executable, "-m", "d2dstream", "validate", "--config", str(workdir / "s.toml")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
