import os

import numpy as np
import pytest

from nonmarkov.cli import main

HEADER = "# tau*omega0,re_gE,im_gE,re_gM,im_gM,N"


def read_lines(path):
    with open(path) as fh:
        return fh.read().split("\n")


def data_rows(path):
    return np.loadtxt(path, delimiter=",", ndmin=2)


def test_curve_row_count_and_header(tmp_path):
    out = str(tmp_path / "c.csv")
    code = main(
        ["curve", "--s", "1", "--eta-rel", "1.5", "--temp-k", "0.5",
         "--n0", "1", "--tau-max", "10", "--points", "80", "--out", out]
    )
    assert code == 0
    lines = read_lines(out)
    assert HEADER in lines
    rows = data_rows(out)
    assert rows.shape == (81, 6)
    assert rows[0, 0] == 0.0
    assert rows[-1, 0] == pytest.approx(10.0)
    assert np.all(np.isfinite(rows))


def test_curve_nprime_column(tmp_path):
    out = str(tmp_path / "c.csv")
    assert main(
        ["curve", "--tau-max", "5", "--points", "40", "--nprime", "--out", out]
    ) == 0
    lines = read_lines(out)
    assert HEADER + ",Nprime" in lines
    assert data_rows(out).shape == (41, 7)


def test_curve_zero_coupling(tmp_path):
    out = str(tmp_path / "c.csv")
    assert main(
        ["curve", "--eta-rel", "0", "--tau-max", "5", "--points", "40",
         "--out", out]
    ) == 0
    assert np.max(data_rows(out)[:, 5]) < 1e-12


def test_curve_deterministic_body(tmp_path):
    args = ["curve", "--tau-max", "5", "--points", "40"]
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert main(args + ["--out", a]) == 0
    assert main(args + ["--out", b]) == 0
    la = [l for l in read_lines(a) if not l.startswith("# generated")]
    lb = [l for l in read_lines(b) if not l.startswith("# generated")]
    assert la == lb


def test_record_replay(tmp_path):
    out = str(tmp_path / "c.csv")
    replay = str(tmp_path / "r.csv")
    assert main(
        ["curve", "--s", "2", "--eta-rel", "1.2", "--tau-max", "5",
         "--points", "40", "--out", out]
    ) == 0
    assert main(["curve", "--record", out, "--out", replay]) == 0
    la = [l for l in read_lines(out) if not l.startswith("# generated")]
    lb = [l for l in read_lines(replay) if not l.startswith("# generated")]
    assert la == lb


def test_curve_svg_output(tmp_path):
    out = str(tmp_path / "c.csv")
    svg = str(tmp_path / "c.svg")
    assert main(
        ["curve", "--tau-max", "5", "--points", "40", "--out", out,
         "--svg", svg]
    ) == 0
    assert os.path.getsize(svg) > 0


def test_flag_errors_exit_two(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["curve", "--points", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["curve", "--eta", "0.1", "--eta-rel", "0.5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["fig", "9"])
    assert exc.value.code == 2


def test_numerical_failure_exit_three(tmp_path):
    # empty mode in an empty bath: the coherence is 0/0
    out = str(tmp_path / "c.csv")
    code = main(
        ["curve", "--temp-k", "0", "--n0", "0", "--tau-max", "5",
         "--points", "40", "--out", out]
    )
    assert code == 3
    assert not os.path.exists(out)


def test_localized_report(capsys):
    assert main(["localized", "--s", "1", "--eta-rel", "0.5"]) == 0
    text = capsys.readouterr().out
    assert "no localized mode" in text
    assert main(["localized", "--s", "1", "--eta-rel", "1.5"]) == 0
    text = capsys.readouterr().out
    assert "omega_b" in text and "Z = " in text


def test_fig_presets_preview(tmp_path):
    for fig_id, n_curves in ((1, 20), (2, 24), (3, 24)):
        outdir = str(tmp_path / f"fig{fig_id}")
        assert main(
            ["fig", str(fig_id), "--outdir", outdir, "--tau-max", "4",
             "--points", "32", "--jobs", "1"]
        ) == 0
        files = sorted(os.listdir(outdir))
        csvs = [f for f in files if f.endswith(".csv") and "index" not in f]
        assert len(csvs) == n_curves
        index = os.path.join(outdir, f"fig{fig_id}_index.csv")
        with open(index) as fh:
            entries = [l for l in fh if not l.startswith("#")]
        assert len(entries) == n_curves
