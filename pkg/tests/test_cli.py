import json
import math
import os
import subprocess
import sys

import pytest

from punctlap.cli import run

PY = [sys.executable, "-m", "punctlap.cli"]


def _run(args):
    return subprocess.run(PY + list(args), capture_output=True, text=True)


def _capture(capsys, args):
    code = run(list(args))
    return code, capsys.readouterr().out


# --- exit codes ------------------------------------------------------------


def test_unknown_subcommand_is_usage_error():
    r = _run(["bogus"])
    assert r.returncode == 64


def test_unknown_flag_is_usage_error():
    r = _run(["classify", "--n", "2", "--p", "2", "--frobnicate"])
    assert r.returncode == 64


def test_domain_error_exit_code():
    r = _run(["eval-kernel", "--fn", "G", "--n", "2", "--radii", "0"])
    assert r.returncode == 1
    assert "domain error" in r.stderr


def test_success_exit_code():
    r = _run(["classify", "--n", "2", "--p", "2"])
    assert r.returncode == 0


# --- worked examples -------------------------------------------------------


def test_classify_example(capsys):
    code, out = _capture(capsys, ["classify", "--n", "2", "--p", "2"])
    assert code == 0
    obj = json.loads(out)
    assert obj["case"] == "ScalarSingular"
    assert obj["singular_dim"] == 1


def test_spectrum_example(capsys):
    code, out = _capture(capsys, ["spectrum", "--n", "2", "--beta", "2", "--radii", "1"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "# schema=spectrum/v1"
    header = lines[1].split(",")
    row = dict(zip(header, lines[2].split(",")))
    assert abs(float(row["lam"]) - math.exp(-1.0)) < 1e-15


def test_eval_kernel_example(capsys):
    code, out = _capture(capsys, ["eval-kernel", "--fn", "G", "--n", "3", "--radii", "1"])
    assert code == 0
    value = float(out.strip().splitlines()[2].split(",")[1])
    assert abs(value - 1.0 / (4.0 * math.pi * math.e)) < 1e-15


def test_decompose_oned_worked_example(capsys):
    code, out = _capture(
        capsys,
        [
            "decompose", "--mode", "oned",
            "--u-plus", "0.5", "--u-minus", "0.5",
            "--du-plus", "-1", "--du-minus", "1",
        ],
    )
    obj = json.loads(out)
    assert obj == {"c0": 2.0, "c1": 0.0, "f0": -0.5, "f1": 0.0}


def test_dictionary_inf_encoding(capsys):
    code, out = _capture(capsys, ["dictionary", "--n", "3", "--beta-values", "0,inf"])
    lines = out.strip().splitlines()
    assert lines[2].split(",")[1] == "inf"  # beta=0 -> alpha=inf
    assert lines[3].split(",")[0] == "inf"


# --- output formats --------------------------------------------------------


def test_csv_schema_line_and_17_digits(capsys):
    code, out = _capture(capsys, ["eval-kernel", "--fn", "G", "--n", "2", "--radii", "0.3"])
    lines = out.strip().splitlines()
    assert lines[0].startswith("# schema=") and lines[0].endswith("/v1")
    value_text = lines[2].split(",")[1]
    # lossless round trip through the printed representation
    assert float(value_text) == float(format(float(value_text), ".17g"))


def test_json_sorted_keys(capsys):
    code, out = _capture(capsys, ["predicates", "--n", "3", "--p", "2"])
    obj = json.loads(out)
    assert list(obj) == sorted(obj)


def test_determinism_byte_identical():
    args = ["simulate", "--beta", "25.13", "--y-radius", "0.7", "--dt", "0.01",
            "--horizon", "0.1", "--paths", "20", "--seed", "42"]
    a = _run(args)
    b = _run(args)
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_output_file_and_env_dir(tmp_path, capsys):
    env = dict(os.environ, PUNCTLAP_OUTPUT_DIR=str(tmp_path))
    r = subprocess.run(
        PY + ["classify", "--n", "3", "--p", "4", "--output", "cls.json"],
        capture_output=True, text=True, env=env,
    )
    assert r.returncode == 0
    obj = json.loads((tmp_path / "cls.json").read_text())
    assert obj["case"] == "Regular"


def test_config_file_merging(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n=2\nradii=0.5\n")
    # radii passed on the command line wins; n comes from the config
    code, out = _capture(
        capsys,
        ["eval-kernel", "--fn", "G", "--config", str(cfg), "--radii", "1"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[2].split(",")[0] == "1"
    import scipy.special

    want = scipy.special.kv(0, 1.0) / (2.0 * math.pi)
    assert abs(float(lines[2].split(",")[1]) - want) < 1e-10


def test_selftest_passes(capsys):
    code, out = _capture(capsys, ["selftest"])
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_wellposedness_report(capsys):
    code, out = _capture(
        capsys, ["wellposedness", "--n", "3", "--p", "2", "--beta", "25.13", "--l", "1.7"]
    )
    obj = json.loads(out)
    assert obj["wellposed"] is True
    assert obj["invariant_measure"] is True
    assert obj["hl_wellposed"] is True


def test_heat_kernel_grid(capsys):
    code, out = _capture(
        capsys,
        ["heat-kernel", "--beta", "25.13", "--t", "0.5", "--x-radius", "0.4",
         "--radii", "0.3,0.8"],
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "# schema=heat-kernel/v1"
    for line in lines[2:]:
        fields = [float(v) for v in line.split(",")]
        assert fields[1] > 0 and fields[2] > 0  # kernels positive


def test_green_form_cli(capsys):
    code, out = _capture(
        capsys,
        ["green", "--n", "3", "--p", "2", "--u-c0", "1", "--u-f0", "0.5",
         "--v-c0", "2", "--v-f0", "-1"],
    )
    obj = json.loads(out)
    assert obj == {"real": -2.0, "imag": 0.0}


# --- round trip with the plotting reader contract --------------------------


def test_csv_round_trip_parse(capsys):
    code, out = _capture(
        capsys, ["eval-kernel", "--fn", "G", "--n", "3", "--radii", "0.25,0.5,1,2"]
    )
    lines = out.strip().splitlines()
    schema = lines[0].removeprefix("# schema=")
    name, version = schema.split("/")
    assert name == "eval-kernel" and version == "v1"
    header = lines[1].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in lines[2:]]
    assert len(rows) == 4
    # numeric columns reparse exactly and reprint identically
    for row in rows:
        v = float(row["value"])
        assert format(v, ".17g") == row["value"]
