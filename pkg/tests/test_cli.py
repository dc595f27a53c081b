import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from casimir_spin.cli.config import ConfigError, SweepAxis, build_config, parse_keyvalue
from casimir_spin.cli.main import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_ORACLE, EXIT_PHYSICS, main
from casimir_spin.polarizability import spheroid_depolarization


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_OK, err
    return json.loads(out)


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_depol_sphere(capsys):
    rep = run_json(capsys, "depol", "--a", "2", "--b", "2", "--c", "2", "--eps1", "3")
    res = rep["results"]
    for key in ("m_X", "m_Y", "m_Z"):
        assert res[key] == pytest.approx(1 / 3, abs=1e-12)
    assert res["alpha"] == 0.0
    assert set(rep) == {"config", "units", "results", "checks"}


def test_depol_matched_permittivity(capsys):
    rep = run_json(capsys, "depol", "--eps", "2", "--eps1", "2")
    assert [rep["results"][k] for k in ("A_XX", "A_YY", "A_ZZ")] == [0.0, 0.0, 0.0]


def test_depol_spheroid_cross_check(capsys):
    rep = run_json(capsys, "depol", "--a", "1", "--b", "1", "--c", "3")
    assert rep["checks"]["m_Z_closed_form"] == pytest.approx(spheroid_depolarization(1, 3), rel=1e-15)
    assert rep["checks"]["m_Z_rel_error"] <= 1e-10


def test_mode_torque_zero_cases(capsys):
    for extra in (("--Omega", "0"), ("--theta", "0")):
        res = run_json(capsys, "mode-torque", *extra)["results"]
        assert res["gamma_exact"] == 0.0
        assert res["gamma_small_omega"] == 0.0


def test_mode_torque_breakdown_sums(capsys):
    res = run_json(capsys, "mode-torque", "--alpha", "1", "--Omega", "0.03", "--theta", "1.1")["results"]
    total = math.fsum(c["torque"] for c in res["components"])
    assert total == pytest.approx(res["gamma_exact"], rel=1e-10)
    assert len(res["components"]) == 5


def test_vacuum_scalings(capsys):
    g1 = run_json(capsys, "vacuum", "--Omega", "0.001")["results"]["gamma_c"]
    g2 = run_json(capsys, "vacuum", "--Omega", "0.002")["results"]["gamma_c"]
    assert g2 / g1 == pytest.approx(2.0, abs=1e-12)
    c1 = run_json(capsys, "vacuum", "--cutoff", "0.25")["results"]["gamma_c"]
    c2 = run_json(capsys, "vacuum", "--cutoff", "0.5")["results"]["gamma_c"]
    assert c2 / c1 == pytest.approx(64.0, abs=1e-9)
    assert run_json(capsys, "vacuum", "--c", "1")["results"]["gamma_c"] == 0.0


def test_vacuum_spectrum_csv(capsys, tmp_path):
    spec = tmp_path / "spectrum.csv"
    code, _, err = run(capsys, "vacuum", "--spectrum-out", str(spec), "--set", "spectrum_samples=11")
    assert code == EXIT_OK, err
    rows = read_csv(spec.read_text())
    assert len(rows) == 11
    assert float(rows[0]["dgamma_domega"]) == 0.0


def test_verify_passes(capsys):
    rep = run_json(capsys, "verify")
    assert rep["results"]["all_passed"]
    small = rep["checks"]["small_omega"]
    assert small["ez_coefficient_finite_difference"] == pytest.approx(4.0, rel=1e-6)
    assert small["ez_coefficient_printed_closed_form"] == pytest.approx(2.0, rel=1e-6)


@pytest.mark.parametrize("fault, check", [("prefactor", "stress_oracle"), ("sign", "resistivity")])
def test_verify_fault_injection(capsys, fault, check):
    code, out, err = run(capsys, "verify", "--inject-fault", fault)
    assert code == EXIT_ORACLE
    rep = json.loads(out)
    assert not rep["checks"][check]["passed"]
    assert check in err


def test_sweep_single_point_matches_run(capsys):
    code, out, _ = run(capsys, "sweep", "--format", "csv", "--sweep", "theta:0.7:0.7:1")
    assert code == EXIT_OK
    rows = read_csv(out)
    assert len(rows) == 1
    single = run_json(capsys, "mode-torque", "--theta", "0.7")["results"]
    assert float(rows[0]["result.gamma_exact"]) == single["gamma_exact"]


def test_sweep_theta_endpoints(capsys):
    _, out, _ = run(capsys, "sweep", "--sweep", f"theta:0:{math.pi!r}:7")
    rows = read_csv(out)
    assert float(rows[0]["result.gamma_exact"]) == 0.0
    assert float(rows[-1]["result.gamma_exact"]) == 0.0
    assert all(float(r["result.gamma_exact"]) < 0 for r in rows[1:-1])


def test_sweep_omega_loglog_slope(capsys):
    _, out, _ = run(capsys, "sweep", "--sweep", "Omega:1e-5:1e-3:6:log", "--workers", "3")
    rows = read_csv(out)
    x = np.log([float(r["Omega"]) for r in rows])
    y = np.log([-float(r["result.gamma_exact"]) for r in rows])
    assert np.polyfit(x, y, 1)[0] == pytest.approx(1.0, abs=1e-3)


def test_sweep_two_axes_row_order(capsys):
    _, out, _ = run(capsys, "sweep", "--sweep", "theta:0.5:1.0:2", "--sweep", "Omega:0.01:0.02:3",
                    "--quantity", "vacuum")
    rows = read_csv(out)
    assert [(float(r["theta"]), float(r["Omega"])) for r in rows] == [
        (0.5, 0.01), (0.5, 0.015), (0.5, 0.02), (1.0, 0.01), (1.0, 0.015), (1.0, 0.02)]
    assert "result.gamma_c" in rows[0]


def test_sweep_worker_env(capsys, monkeypatch):
    monkeypatch.setenv("CASIMIR_SPIN_WORKERS", "4")
    _, serial, _ = run(capsys, "sweep", "--sweep", "theta:0:3:9", "--workers", "1")
    _, parallel, _ = run(capsys, "sweep", "--sweep", "theta:0:3:9")
    assert serial == parallel
    monkeypatch.setenv("CASIMIR_SPIN_WORKERS", "many")
    assert run(capsys, "sweep")[0] == EXIT_CONFIG


def test_too_many_sweep_axes(capsys):
    code, _, err = run(capsys, "sweep", "--sweep", "a:1:2:2", "--sweep", "b:1:2:2", "--sweep", "c:1:2:2")
    assert code == EXIT_CONFIG


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# spinning prolate body\nOmega = 0.02\ntheta = 1.0  # radians\nunits.system = natural\n")
    rep = run_json(capsys, "mode-torque", "--config", str(cfg), "--theta", "0.5")
    assert rep["config"]["Omega"] == 0.02
    assert rep["config"]["theta"] == 0.5


def test_config_error_has_line_number(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("Omega = 0.02\nbogus = 3\n")
    code, _, err = run(capsys, "depol", "--config", str(cfg))
    assert code == EXIT_CONFIG
    assert "bad.cfg:2" in err and "bogus" in err


def test_config_bad_value(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("a = wide\n")
    code, _, err = run(capsys, "depol", "--config", str(cfg))
    assert code == EXIT_CONFIG
    assert "bad.cfg:1" in err


def test_physics_error_exit(capsys):
    assert run(capsys, "depol", "--a", "-1")[0] == EXIT_PHYSICS
    # triaxial body has no alpha/beta split for the torque
    assert run(capsys, "mode-torque", "--a", "1", "--b", "2")[0] == EXIT_PHYSICS


def test_unwritable_output(capsys, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(capsys, "sweep", "--out", str(target))
    assert code == EXIT_IO
    assert "I/O" in err


def test_report_round_trip(capsys, tmp_path):
    first = tmp_path / "first.json"
    assert run(capsys, "mode-torque", "--Omega", "0.04", "--theta", "0.3", "--out", str(first))[0] == EXIT_OK
    second = tmp_path / "second.json"
    assert run(capsys, "mode-torque", "--config", str(first), "--out", str(second))[0] == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_keyvalue_round_trip():
    cfg = build_config({}, {"Omega": 0.3, "sweep": "theta:0:1:3:linear"})
    again = build_config(parse_keyvalue(cfg.to_text()))
    assert again == cfg


def test_units_block(capsys):
    rep = run_json(capsys, "vacuum", "--set", "units.system=gaussian", "--set", "units.length=1e-7")
    assert rep["units"]["c"] == pytest.approx(2.99792458e17)
    assert rep["config"]["units.system"] == "gaussian"


def test_sweep_axis_parse():
    ax = SweepAxis.parse("Omega:1e-3:1e-1:3:log")
    assert ax.values() == pytest.approx([1e-3, 1e-2, 1e-1])
    for bad in ("Omega:1:2", "nope:0:1:2", "Omega:0:1:0", "Omega:0:1:3:log", "Omega:0:inf:2"):
        with pytest.raises(ConfigError):
            SweepAxis.parse(bad)


def test_csv_is_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"sweep{i}.csv"
        subprocess.run([sys.executable, "-m", "casimir_spin", "sweep", "--sweep", "theta:0:3:5",
                        "--sweep", "Omega:0.001:0.1:3:log", "--out", str(target), "--workers", "2"],
                       check=True)
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    assert b"\r" not in outs[0]
