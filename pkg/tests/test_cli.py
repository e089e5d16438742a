import csv
import io
import math
import subprocess
import sys

import numpy as np
import pytest

from qbmtemp import cli, thermo
from qbmtemp.errors import NoBracket


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def column(text, name):
    header, rows = table(text)
    i = header.index(name)
    return np.array([float(r[i]) for r in rows])


def test_beta_gamma_zero():
    code, out, _ = run("beta", "--gamma", "0", "--energy", "0.2")
    assert code == 0
    header, rows = table(out)
    assert header == ["gamma", "E_paper", "beta", "S_over_K", "S_A_over_K", "q2", "residual", "iterations"]
    assert len(rows) == 1
    assert float(rows[0][2]) == pytest.approx(5.6514, abs=1e-4)
    assert rows[0][2] == "5.65141275137"


def test_beta_ground_state_sentinel():
    code, out, _ = run("beta", "--gamma", "1", "--energy", "0")
    assert code == 0
    header, rows = table(out)
    row = dict(zip(header, rows[0]))
    assert row["beta"] == "inf"
    assert row["S_A_over_K"] == "0"


@pytest.mark.parametrize(
    "argv",
    [
        ("beta", "--gamma", "-1"),
        ("beta", "--gamma", "abc"),
        ("beta", "--wd-ratio", "0"),
        ("beta", "--energy", "-2"),
        ("beta", "--steps", "5"),
        ("sweep", "--vary", "gamma", "--min", "0", "--max", "1", "--steps", "1"),
        ("sweep", "--vary", "E", "--min", "0", "--max", "1", "--log"),
        ("sweep", "--vary", "gamma", "--min", "2", "--max", "1"),
        ("sweep",),
        ("oracle-compare", "--n-modes", "1,64"),
        ("oracle-compare", "--n-modes", "4096"),
        ("oracle-compare", "--energy", "0"),
        ("fig7",),
        ("beta", "--unknown"),
    ],
)
def test_config_errors_exit_2(argv):
    code, out, err = run(*argv)
    assert code == cli.EXIT_CONFIG
    assert out == ""
    assert "config error" in err


def test_config_error_leaves_no_file(tmp_path):
    target = tmp_path / "out.csv"
    cfg = tmp_path / "run.cfg"
    cfg.write_text("gamma_over_w0 = 1\nbogus_key = 3\n")
    code, _, _ = run("beta", "--config", str(cfg), "--out", str(target))
    assert code == cli.EXIT_CONFIG
    assert not target.exists()
    assert list(tmp_path.iterdir()) == [cfg]


def test_existing_output_untouched_on_error(tmp_path):
    target = tmp_path / "out.csv"
    target.write_text("previous\n")
    code, _, _ = run("beta", "--gamma", "-3", "--out", str(target))
    assert code == cli.EXIT_CONFIG
    assert target.read_text() == "previous\n"


def test_solver_error_exit_3(monkeypatch, tmp_path):
    def fail(*args, **kwargs):
        raise NoBracket("forced")

    monkeypatch.setattr(thermo, "beta_of_E", fail)
    target = tmp_path / "out.csv"
    code, out, err = run("beta", "--gamma", "1", "--out", str(target))
    assert code == cli.EXIT_SOLVER
    assert "NoBracket" in err
    assert not target.exists()


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# figure 2 setting\n"
        "kappa_w0_cubed = 5\n"
        "wD_over_w0 = 10   # Markovian\n"
        "gamma_over_w0 = 2\n"
        "energy_paper_units = 10\n"
        "\n"
    )
    code, out, _ = run("beta", "--config", str(cfg))
    assert code == 0
    header, rows = table(out)
    assert rows[0][0] == "2" and rows[0][1] == "10"
    # command-line flags override the file
    code, out2, _ = run("beta", "--config", str(cfg), "--gamma", "0")
    assert table(out2)[1][0][0] == "0"


@pytest.mark.parametrize(
    "text, message",
    [
        ("gamma_over_w0 1\n", "expected key = value"),
        ("gamma_over_w0 = 1\ngamma_over_w0 = 2\n", "duplicate"),
        ("temperature = 3\n", "unknown key"),
        ("log_scale = maybe\n", "boolean"),
        ("steps = 2.5\n", "integer"),
    ],
)
def test_config_parse_errors(tmp_path, text, message):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    code, _, err = run("sweep", "--config", str(cfg))
    assert code == cli.EXIT_CONFIG
    assert message in err


def test_missing_config_file(tmp_path):
    code, _, err = run("beta", "--config", str(tmp_path / "nope.cfg"))
    assert code == cli.EXIT_CONFIG


def test_csv_formatting():
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(math.inf) == "inf"
    assert cli.fmt(-math.inf) == "-inf"
    assert cli.fmt(math.nan) == "nan"
    assert cli.fmt(np.int64(7)) == "7"
    assert cli.fmt(2.0) == "2"
    assert cli.fmt(1.5e-20) == "1.5e-20"
    text = cli.render_csv(["a", "b"], [[1, 0.5], [2, "ok"]])
    assert text == "a,b\n1,0.5\n2,ok\n"


def test_fig1_columns_and_increase():
    code, out, _ = run("fig1", "--steps", "11")
    assert code == 0
    header, rows = table(out)
    assert header == ["gamma", "beta", "status"]
    beta = column(out, "beta")
    assert beta[0] == pytest.approx(5.6514, abs=1e-4)
    assert np.all(np.diff(beta) > 0)
    assert all(r[-1] == "ok" for r in rows)


def test_fig2_columns():
    code, out, _ = run("fig2", "--steps", "6")
    header, _ = table(out)
    assert header[0] == "gamma" and header[-1] == "status"
    assert len(header) == 2 + len(cli.FIG2_WD_RATIOS)
    assert np.all(np.diff(column(out, "beta_wD_10")) > 0)
    code, out, _ = run("fig2", "--steps", "3", "--wd-ratio", "3")
    assert table(out)[0] == ["gamma", "beta_wD_3", "status"]


def test_fig3_log_grid():
    code, out, _ = run("fig3", "--steps", "5", "--gamma", "5")
    assert code == 0
    wd = column(out, "omegaD")
    np.testing.assert_allclose(wd, np.geomspace(0.05, 100, 5), rtol=1e-11)
    assert table(out)[0] == ["omegaD", "beta_gamma_5", "status"]


def test_fig4_saturation():
    code, out, _ = run("fig4", "--steps", "21")
    assert code == 0
    full, first = column(out, "full"), column(out, "first_order")
    assert full[0] == first[0]
    assert full[-1] - full[-2] < first[-1] - first[-2]


def test_fig5_localization():
    code, out, _ = run("fig5", "--steps", "6")
    assert code == 0
    for e in ("0.2", "1", "10"):
        assert np.all(np.diff(column(out, f"q2_E_{e}")) < 0)
    assert np.all(column(out, "q2_E_0.2") < column(out, "q2_E_10"))


def test_fig_point_failures_flagged(monkeypatch):
    real = thermo.beta_of_E

    def flaky(E, p, **kw):
        if p.gamma > 0.9:
            raise NoBracket("forced")
        return real(E, p, **kw)

    monkeypatch.setattr(thermo, "beta_of_E", flaky)
    code, out, _ = run("fig1", "--steps", "3", "--max", "1")
    assert code == 0
    _, rows = table(out)
    assert [r[-1] for r in rows] == ["ok", "ok", "error:NoBracket"]
    assert rows[-1][1] == "nan"


def test_sweep_output(tmp_path):
    target = tmp_path / "sweep.csv"
    code, out, _ = run(
        "sweep", "--vary", "E", "--min", "0.1", "--max", "100", "--steps", "4", "--log",
        "--gamma", "1", "--out", str(target),
    )
    assert code == 0 and out == ""
    text = target.read_text()
    header, rows = table(text)
    assert header == cli.SWEEP_HEADER
    assert [float(r[3]) for r in rows] == pytest.approx([0.1, 1.0, 10.0, 100.0])
    assert np.all(np.diff(column(text, "beta")) < 0)
    assert [r[0] for r in rows] == ["0", "1", "2", "3"]


def test_oracle_compare():
    code, out, _ = run("oracle-compare", "--gamma", "0", "--energy", "10")
    assert code == 0
    header, rows = table(out)
    assert header == ["N", "beta_finite", "beta_continuum", "rel_error"]
    assert [r[0] for r in rows] == ["64", "256", "1024"]
    assert float(rows[-1][3]) <= 1e-2
    code, out, _ = run("oracle-compare", "--gamma", "1", "--energy", "10")
    err = column(out, "rel_error")
    assert np.all(np.diff(err) < 0)
    code, out, _ = run("oracle-compare", "--gamma", "1", "--energy", "10", "--n-modes", "2")
    assert code == 0
    assert float(table(out)[1][0][3]) > 1e-3


@pytest.mark.parametrize(
    "argv",
    [
        ("beta", "--gamma", "3", "--energy", "1"),
        ("fig4", "--steps", "5"),
        ("sweep", "--vary", "omegaD", "--min", "0.5", "--max", "20", "--steps", "4", "--log"),
        ("oracle-compare", "--gamma", "1", "--n-modes", "16,64"),
    ],
)
def test_byte_identical_files(tmp_path, argv):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(*argv, "--out", str(a))[0] == 0
    assert run(*argv, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qbmtemp", "beta", "--gamma", "0", "--energy", "10"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].split(",")[2] == "2.12527202731"
    proc = subprocess.run([sys.executable, "-m", "qbmtemp", "beta", "--kappa", "0"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert proc.stdout == ""
