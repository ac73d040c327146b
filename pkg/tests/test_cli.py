import json
import math

import pytest

from widomkit.cli import run_command


def run(tmp_path, *argv):
    return run_command([*argv, "--out", str(tmp_path)])


def test_capacity(tmp_path, capsys):
    assert run(tmp_path, "capacity", "--bands", "-1 1") == 0
    out = capsys.readouterr().out
    assert "log_cap=-0.693147180559945" in out and "cap=0.5" in out
    assert (tmp_path / "capacity.csv").exists()


def test_widom_two_band(tmp_path):
    assert run(tmp_path, "widom", "--bands", "-1 -0.6, 0.6 1", "--n-max", "30") == 0
    rows = (tmp_path / "widom.csv").read_text().splitlines()
    w2 = float(rows[2].split(",")[2])
    assert abs(w2 - math.sqrt(2)) < 1e-4


def test_tset(tmp_path, capsys):
    assert run(tmp_path, "tset", "--tset-coeffs", "-2.125,0,3.125", "--n-max", "30", "--format", "json") == 0
    out = capsys.readouterr().out
    assert "bands=(-1,-0.6) (0.6,1)" in out and "exact_cap=0.4" in out
    rec = json.loads((tmp_path / "tset.json").read_text())
    assert abs(rec["min_partial_product"] - 1) < 1e-3
    assert rec["band_mass_fraction"] == ["1/2", "1/2"]


def test_roundtrip_dump_set(tmp_path, capsys):
    path = tmp_path / "k.txt"
    assert run(tmp_path, "jacobi", "--bands", "0 0.3, 0.45 1", "--n-max", "12", "--dump-set", str(path)) == 0
    first = (tmp_path / "jacobi.csv").read_text()
    assert run(tmp_path, "jacobi", "--set-file", str(path), "--n-max", "12") == 0
    assert (tmp_path / "jacobi.csv").read_text() == first


@pytest.mark.parametrize(
    "argv",
    [
        ["capacity"],
        ["capacity", "--bands", "1 0"],
        ["widom", "--bands", "0 1", "--n-max", "61"],
        ["widom", "--bands", "0 1", "--n-max", "0"],
        ["tset", "--bands", "0 1"],
        ["tset", "--tset-coeffs", "0.5,-3,0,4"],
        ["chebyshev", "--bands", "0 1", "--n-max", "41"],
        ["capacity", "--set-file", "/nonexistent/set.txt"],
        ["jacobi", "--bands", "0 1", "--n-max", "20", "--nodes-per-band", "100"],
        ["study", "--bands", "0 1"],
        ["study", "--depth", "9"],
    ],
)
def test_input_errors_exit_2(tmp_path, capsys, argv):
    assert run(tmp_path, *argv) == 2
    err = capsys.readouterr().err
    assert err.startswith("error:") and "Traceback" not in err


def test_argparse_errors_exit_2(tmp_path):
    with pytest.raises(SystemExit) as info:
        run(tmp_path, "nonsense")
    assert info.value.code == 2


def test_chebyshev_and_eqmeasure(tmp_path, capsys):
    assert run(tmp_path, "chebyshev", "--bands", "0 1, 2 3", "--n-max", "10") == 0
    assert (tmp_path / "chebyshev.csv").read_text().startswith("n,sup_norm,log_m,m_n,cert_lower_bound\n")
    assert run(tmp_path, "eqmeasure", "--bands", "0 1, 2 3", "--format", "json") == 0
    rec = json.loads((tmp_path / "eqmeasure.json").read_text())
    assert rec["c_points"] == [1.5] and len(rec["density"]) == 130


def test_random_study(tmp_path, capsys):
    assert run(tmp_path, "study", "--family", "random", "--count", "3", "--seed", "4", "--n-max", "12") == 0
    assert (tmp_path / "random_s4_c3" / "summary.csv").exists()


def test_invariant_failure_exit_3(tmp_path, capsys, monkeypatch):
    import widomkit.cli as cli
    from widomkit.jacobi import WidomSeries

    monkeypatch.setattr(cli, "widom_factors", lambda J, log_cap: WidomSeries(J.a * 0 - 1.0))
    assert run(tmp_path, "widom", "--bands", "0 1", "--n-max", "5") == 3
    assert capsys.readouterr().err.startswith("check failed:")


def test_numerical_failure_exit_1(tmp_path, capsys, monkeypatch):
    import widomkit.cli as cli
    from widomkit.errors import NoConvergence

    def boom(U, cfg):
        raise NoConvergence("forced")

    monkeypatch.setattr(cli, "build_potential", boom)
    assert run(tmp_path, "capacity", "--bands", "0 1") == 1
    assert "NoConvergence" in capsys.readouterr().err
