"""Command-line behavior: exit codes, config precedence, emitted files."""

import subprocess
import sys

import numpy as np
import pytest

from symnls.bench import read_csv
from symnls.cli import main
from symnls.spectral import Grid, l2_norm, read_snapshot, rough_data, write_snapshot

_TINY = [
    "--set", "K=32",
    "--set", "T=0.5",
    "--set", "tau_ladder=[0.125, 0.0625, 0.03125]",
    "--set", "tau_ref=0.000625",
]


def test_missing_config_file_exits_1(tmp_path, capsys):
    code = main(["converge", "--config", str(tmp_path / "nope.toml")])
    assert code == 1
    assert "nope.toml" in capsys.readouterr().err


def test_bad_set_flag_exits_1(capsys):
    assert main(["converge", "--set", "K"]) == 1


def test_unknown_config_key_exits_1(tmp_path, capsys):
    path = tmp_path / "c.toml"
    path.write_text("[study]\nwhat = 3\n")
    assert main(["converge", "--config", str(path)]) == 1


def test_converge_writes_csv_with_ladder_rows(tmp_path, capsys):
    out = tmp_path / "conv.csv"
    code = main(["converge", "--out", str(out),
                 "--scheme", "symmetric", "--scheme", "lowreg1", *_TINY])
    assert code == 0
    rows = read_csv(out)
    errors = [r for r in rows if r["metric"] == "l2_error"]
    assert len(errors) == 2 * 3  # schemes x ladder
    assert {r["scheme"] for r in errors} == {"symmetric", "lowreg1"}
    stdout = capsys.readouterr().out
    assert "fitted order" in stdout


def test_converge_config_file_plus_flag_precedence(tmp_path):
    cfg = tmp_path / "study.toml"
    cfg.write_text(
        "[study]\nK = 32\nT = 0.5\nseed = 4\n"
        "tau_ladder = [0.125, 0.0625, 0.03125]\ntau_ref = 0.000625\n"
        'schemes = ["lowreg1"]\n'
    )
    out = tmp_path / "c.csv"
    code = main(["converge", "--config", str(cfg), "--seed", "7", "--out", str(out)])
    assert code == 0
    rows = read_csv(out)
    assert all(r["seed"] == "7" for r in rows)  # flag beats file
    assert all(r["K"] == "32" for r in rows)  # file beats profile


def test_conserve_emits_both_series(tmp_path):
    out = tmp_path / "cons.csv"
    code = main([
        "conserve", "--out", str(out),
        "--set", "K=32", "--set", "T=2.0", "--set", "tau_ladder=[0.125]",
        "--set", "observer_stride=4",
    ])
    assert code == 0
    rows = read_csv(out)
    for scheme in ("symmetric", "lowreg1"):
        assert any(r["scheme"] == scheme and r["metric"] == "mass" for r in rows)
        assert any(r["scheme"] == scheme and r["metric"] == "rel_energy" for r in rows)


def test_timing_emits_wall_times(tmp_path):
    out = tmp_path / "time.csv"
    code = main([
        "timing", "--out", str(out),
        "--scheme", "lowreg1",
        "--set", "K=32", "--set", "T=0.5",
        "--set", "tau_ladder=[0.0625, 0.03125]", "--set", "tau_ref=0.000625",
    ])
    assert code == 0
    rows = read_csv(out)
    walls = [float(r["value"]) for r in rows if r["metric"] == "wall_ms"]
    assert len(walls) == 2 and all(w > 0 for w in walls)


def test_evolve_zero_steps_reproduces_input(tmp_path):
    g = Grid.periodic(32)
    u = rough_data(g, 2.0, 3, 1.0)
    src = tmp_path / "in.nlsf"
    dst = tmp_path / "out.nlsf"
    write_snapshot(u, src)
    code = main(["evolve", "--out", str(dst),
                 "--set", f'input_snapshot="{src}"', "--set", "n_steps=0"])
    assert code == 0
    back = read_snapshot(dst)
    assert np.array_equal(back.coeffs, u.coeffs)


def test_evolve_from_config_file(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(
        '[evolve]\nscheme = "lie"\ntau = 0.05\nn_steps = 8\nK = 32\nalpha = 2.0\n'
    )
    dst = tmp_path / "state.nlsf"
    code = main(["evolve", "--config", str(cfg), "--out", str(dst)])
    assert code == 0
    out = read_snapshot(dst)
    # Lie splitting conserves mass exactly
    u0 = rough_data(Grid.periodic(32), 2.0, 0, 1.0)
    assert l2_norm(out) == pytest.approx(l2_norm(u0), rel=1e-12)


def test_evolve_rejects_unknown_scheme(capsys):
    assert main(["evolve", "--set", 'scheme="rk4"']) == 1


def test_cli_runs_are_reproducible(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        code = main(["converge", "--out", str(out), "--scheme", "lowreg1", *_TINY])
        assert code == 0
        outs.append([r for r in read_csv(out) if r["metric"] == "l2_error"])
    assert outs[0] == outs[1]


def test_selftest_reports_properties(capsys):
    code = main(["selftest"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") >= 8
    assert "FAIL" not in out


def test_console_script_is_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "symnls.cli", "converge", "--scheme", "lowreg1",
         "--out", "/dev/null", *_TINY],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
