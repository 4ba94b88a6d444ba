import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest
from scipy import constants

from vdwfriction.cli import SCHEMA_VERSION, columns, main, run
from vdwfriction.config import load_config, parse_config, reduced_scales
from vdwfriction.plate import PlateConfig, plate_roentgen_closed

from conftest import make_config

PAIR = """
[pair]
separation = {sep}
speed = {speed}
"""


def pair_config(write_config, sep=1e-9, speed=10.0, extra=""):
    return write_config(PAIR.format(sep=sep, speed=speed) + extra)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_zero_speed_gives_zero_newtons(write_config, tmp_path):
    out = tmp_path / "o.csv"
    assert main(["pair", "--config", pair_config(write_config, speed=0.0), "--out", str(out)]) == 0
    header, row = read_csv(out)
    rec = dict(zip(header, row))
    for c in ("vdw_doppler", "vdw_lag", "vdw_theta", "roentgen_c", "roentgen_nc", "total"):
        for a in "xyz":
            assert float(rec[f"{c}_{a}"]) == 0.0


def test_csv_header_and_precision(write_config, tmp_path):
    out = tmp_path / "o.csv"
    main(["pair", "--config", pair_config(write_config), "--out", str(out)])
    header, row = read_csv(out)
    assert tuple(header) == columns()
    rec = dict(zip(header, row))
    assert rec["schema_version"] == str(SCHEMA_VERSION)
    mantissa = rec["total_z"].lstrip("-").split("e")[0].replace(".", "").lstrip("0")
    assert len(mantissa) == 17
    assert float(rec["total_z"]) < 0


def test_near_field_force_in_newtons(write_config, tmp_path):
    # independent SI form of the leading near-field law
    out = tmp_path / "o.csv"
    path = pair_config(write_config, sep=1e-10, speed=10.0)
    main(["pair", "--config", path, "--out", str(out)])
    header, row = read_csv(out)
    rec = dict(zip(header, row))
    mu, wa, wb, R, v = 2.5e-29, 2.0e15, 1.96e15, 1e-10, 10.0
    U = mu**4 / ((4 * np.pi * constants.epsilon_0) ** 2 * constants.hbar * (wa - wb))
    expected = -20 * U * (1 + wb / wa) * (v / constants.c) / ((1 - wb / wa) * R**7)
    assert float(rec["total_z"]) == pytest.approx(expected, rel=1e-2)


def test_jsonl_records(write_config, tmp_path):
    out = tmp_path / "o.jsonl"
    path = pair_config(write_config, extra="\n[sweep]\nvariable = separation\nstart = 1e-9\n"
                                            "stop = 1e-8\ncount = 4\n")
    assert main(["sweep", "--config", path, "--format", "jsonl", "--out", str(out)]) == 0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(recs) == 4
    assert all(r["schema_version"] == SCHEMA_VERSION for r in recs)
    assert [r["index"] for r in recs] == [0, 1, 2, 3]
    assert all(r["error"] == "" for r in recs)


def test_output_is_bitwise_deterministic(write_config, tmp_path):
    path = pair_config(write_config, extra="\n[sweep]\nvariable = speed\nstart = 1\n"
                                            "stop = 100\ncount = 5\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["sweep", "--config", path, "--out", str(a)])
    main(["sweep", "--config", path, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_near_field_sweep_slope(write_config):
    path = pair_config(write_config, extra="\n[sweep]\nvariable = separation\nstart = 1e-10\n"
                                            "stop = 1e-9\ncount = 6\n")
    recs = run(load_config(path))
    x = np.array([r["x"] for r in recs])
    f = np.array([-r["total_z"] for r in recs])
    slope = np.polyfit(np.log(x), np.log(f), 1)[0]
    assert slope == pytest.approx(-7.0, abs=0.05)


def test_speed_sweep_is_linear(write_config):
    path = pair_config(write_config, extra="\n[sweep]\nvariable = speed\nstart = 1\n"
                                            "stop = 100\ncount = 4\n")
    recs = run(load_config(path))
    ratio = [r["total_z"] / r["sweep_value"] for r in recs]
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-5)


def test_plate_roentgen_far_field(write_config, tmp_path):
    k_a = 2.0e15 / constants.c
    height = 30.0 / k_a
    path = write_config(f"[plate]\nheight = {height!r}\ndensity = 1e18\nspeed = 10\n")
    out = tmp_path / "o.csv"
    assert main(["plate", "--config", path, "--out", str(out)]) == 0
    header, row = read_csv(out)
    rec = dict(zip(header, row))
    sc = reduced_scales(load_config(path))
    closed = plate_roentgen_closed(PlateConfig(d_red=k_a * height, sigma_red=1e18 / k_a**2,
                                               beta=10 / constants.c, rho=0.98))[0]
    assert float(rec["roentgen_nc_x"]) == pytest.approx(closed * sc.force_scale, rel=2e-2)
    assert rec["geometry"] == "plate"


def test_pole_is_reported_per_record(write_config, tmp_path):
    out = tmp_path / "o.jsonl"
    path = pair_config(write_config, extra="\n[sweep]\nvariable = rho\ngrid = linear\n"
                                            "start = 0.98\nstop = 1.02\ncount = 3\n"
                                            "[validity]\nenforce = warn\n")
    rc = main(["sweep", "--config", path, "--format", "jsonl", "--out", str(out)])
    assert rc == 1
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert recs[0]["error"] == "" and recs[2]["error"] == ""
    assert recs[1]["error"].startswith("PoleError")
    assert recs[1]["total_z"] is None


def test_strict_flag_rejects_broad_lines(write_config, tmp_path):
    atoms = make_config("").replace("linewidth = 1.0e9", "linewidth = 1.0e14", 1)
    path = tmp_path / "broad.ini"
    path.write_text(atoms + "[pair]\nseparation = 1e-9\nspeed = 1\n[validity]\nenforce = warn\n")
    out = tmp_path / "o.jsonl"
    assert main(["pair", "--config", str(path), "--strict", "--format", "jsonl",
                 "--out", str(out)]) == 1
    rec = json.loads(out.read_text())
    assert "ValidityError" in rec["error"] and "Gamma_{A,B} < Delta_{AB}" in rec["error"]


def test_geometry_mismatch_is_usage_error(write_config):
    with pytest.raises(SystemExit) as info:
        main(["plate", "--config", pair_config(write_config)])
    assert info.value.code == 2


def test_sweep_requires_section(write_config):
    with pytest.raises(SystemExit) as info:
        main(["sweep", "--config", pair_config(write_config)])
    assert info.value.code == 2


class TestVerify:
    @pytest.mark.parametrize("suite", ["", "  ,", "gradients,bogus"])
    def test_bad_suite_is_usage_error(self, suite):
        with pytest.raises(SystemExit) as info:
            main(["verify", "--suite", suite])
        assert info.value.code == 2

    def test_gradients_pass(self, tmp_path):
        out = tmp_path / "v.jsonl"
        assert main(["verify", "--suite", "gradients", "--out", str(out)]) == 0
        recs = [json.loads(line) for line in out.read_text().splitlines()]
        assert recs and all(r["passed"] and r["schema_version"] == SCHEMA_VERSION for r in recs)

    def test_plate_suite_reports_failure(self, tmp_path):
        out = tmp_path / "v.jsonl"
        assert main(["verify", "--suite", "plate", "--out", str(out)]) == 1
        recs = [json.loads(line) for line in out.read_text().splitlines()]
        assert any(not r["passed"] for r in recs)

    def test_uses_config_state(self, write_config, tmp_path):
        out = tmp_path / "v.jsonl"
        path = pair_config(write_config, sep=1e-8, speed=0.0)
        assert main(["verify", "--config", path, "--suite", "residues,linearity",
                     "--out", str(out)]) == 0


def test_console_entry_point(write_config):
    proc = subprocess.run([sys.executable, "-m", "vdwfriction.cli", "pair", "--config",
                           pair_config(write_config), "--format", "jsonl"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["schema_version"] == SCHEMA_VERSION
