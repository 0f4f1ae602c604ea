"""Command-line interface: exit codes, artifacts, determinism."""

import json

import pytest

from cifh import cli, model, pipeline
from cifh.pipeline import CertificationError


def test_solve_report_file(tmp_path):
    out = tmp_path / "r.json"
    rc = cli.main(["solve", "--graph", "line4", "--report", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["kind"] == "solve"
    assert rep["result"]["ratio_bound"] >= 1.0 / 3.0 - 1e-12


def test_solve_stdout(capsys):
    rc = cli.main(["solve", "--generate", "heisenberg-line4"])
    assert rc == 0
    captured = capsys.readouterr()
    rep = json.loads(captured.out)
    assert rep["kind"] == "solve"
    assert "certified ratio_bound" in captured.err


def test_solve_sweep_emits_siblings(tmp_path):
    out = tmp_path / "r.json"
    rc = cli.main([
        "solve", "--graph", "line4", "--report", str(out), "--sweep", "4",
    ])
    assert rc == 0
    csv = tmp_path / "r.csv"
    png = tmp_path / "r.png"
    assert csv.exists() and png.exists()
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == "p_class,energy_class,energy_quad,energy_total,ratio"
    assert len(lines) == 1 + 5
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_solve_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        rc = cli.main([
            "solve", "--generate", "random", "--n", "5", "--seed", "4",
            "--convention", "psd", "--report", str(path),
        ])
        assert rc == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_csv_and_figure(tmp_path):
    out = tmp_path / "curve.csv"
    fig = tmp_path / "curve_fig.png"
    rc = cli.main([
        "sweep", "--graph", "cycle4", "--steps", "5",
        "--out", str(out), "--figure", str(fig),
    ])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 1 + 6
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_sweep_no_figure(tmp_path):
    out = tmp_path / "curve.csv"
    rc = cli.main([
        "sweep", "--graph", "line4", "--steps", "3", "--out", str(out),
        "--no-figure",
    ])
    assert rc == 0
    assert out.exists()
    assert not (tmp_path / "curve.png").exists()


def test_oracle_output(capsys):
    rc = cli.main(["oracle", "--generate", "heisenberg-line4"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "lambda_max = 1.6160254037844388" in out
    # the 4-mode line gets its ratio upper bound appended
    assert "ratio_upper" in out


def test_oracle_refuses_large(capsys):
    rc = cli.main(["oracle", "--generate", "random", "--n", "15", "--seed", "1"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_generate_round_trip(tmp_path):
    out = tmp_path / "inst.json"
    rc = cli.main([
        "generate", "--generate", "random", "--n", "6", "--seed", "11",
        "--convention", "traceless", "--out", str(out),
    ])
    assert rc == 0
    inst = model.parse_instance(out.read_text())
    assert inst.n == 6
    # solve accepts the generated document
    rc = cli.main(["solve", "--in", str(out), "--report", str(tmp_path / "r.json")])
    assert rc == 0


def test_generate_fixed_particles(tmp_path):
    out = tmp_path / "inst.json"
    rc = cli.main([
        "generate", "--generate", "random", "--n", "6", "--seed", "2",
        "--bipartite", "--zero-potentials", "--particle-target", "2",
        "--out", str(out),
    ])
    assert rc == 0
    inst = model.parse_instance(out.read_text())
    assert inst.particle_target == 2
    rc = cli.main(["solve", "--in", str(out), "--report", str(tmp_path / "r.json")])
    assert rc == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert rep["certificate"]["nu"] == pytest.approx((6 - 4) / 6)


def test_missing_input_is_operational_error(tmp_path, capsys):
    rc = cli.main(["solve", "--in", str(tmp_path / "nope.json")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_bad_document_is_operational_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    rc = cli.main(["solve", "--in", str(bad)])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_guarantee_violation_exit_code(monkeypatch, capsys):
    def boom(*a, **k):
        raise CertificationError("certified ratio 0.1 fell below the theory floor 0.33")

    monkeypatch.setattr(cli, "solve", boom)
    rc = cli.main(["solve", "--graph", "line4"])
    assert rc == 2
    assert "guarantee violated:" in capsys.readouterr().err


def test_bench_filter_no_match(capsys):
    rc = cli.main(["bench", "--filter", "zzz_no_such_criterion"])
    assert rc == 1
    assert "no criteria match" in capsys.readouterr().err


def test_bench_single_pass(capsys):
    rc = cli.main(["bench", "--filter", "line4_closed_forms"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("PASS")
    assert "1/1 criteria passed" in out


def test_random_generate_requires_seed(capsys):
    rc = cli.main(["generate", "--generate", "random", "--n", "4"])
    assert rc == 1
    assert "seed" in capsys.readouterr().err
