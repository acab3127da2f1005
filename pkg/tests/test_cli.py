"""Command-line surface: exit codes, report envelope, deterministic output."""

import json
import os
import xml.etree.ElementTree as ET
from importlib import resources

import jsonschema
import pytest

from schlicht.cli import main, parse_omega
from schlicht.errors import HypothesisError


@pytest.fixture(autouse=True)
def deterministic_env(monkeypatch):
    monkeypatch.setenv("SCHLICHT_DETERMINISTIC", "1")


@pytest.fixture(scope="session")
def envelope_schema():
    text = (resources.files("schlicht") / "schema" / "report.schema.json").read_text()
    return json.loads(text)


def run(args, tmp_path, name="out.json"):
    path = tmp_path / name
    code = main(args + ["--json", str(path)])
    payload = json.loads(path.read_text()) if path.exists() else None
    return code, payload


# -- omega grammar -------------------------------------------------------------

def test_parse_omega_monomials():
    assert abs(parse_omega("0.5*z^2").series[2] - 0.5) < 1e-15
    assert abs(parse_omega("z").series[1] - 1.0) < 1e-15
    assert abs(parse_omega("1").series[0] - 1.0) < 1e-15


def test_parse_omega_moebius_tag():
    cand = parse_omega("(z+a)/(1+az)", a=0.5)
    assert abs(cand.series[0] - 0.5) < 1e-15


def test_parse_omega_rejects_garbage():
    import click
    with pytest.raises(click.UsageError):
        parse_omega("exp(z)")


# -- exit codes ------------------------------------------------------------------

def test_membership_exit_zero_and_verdict(tmp_path, envelope_schema):
    code, payload = run(["membership", "--family", "f_theta",
                         "--lambda", "0.5", "--theta", "0",
                         "--against", "0.5"], tmp_path)
    assert code == 0
    jsonschema.validate(payload, envelope_schema)
    assert payload["result"]["verdict"] == "IN"
    assert payload["wall_time_ms"] == 0


def test_missing_parameter_exits_two(capsys):
    assert main(["membership", "--family", "f_theta"]) == 2
    assert main(["membership", "--family", "f_theta", "--theta", "0"]) == 2


def test_unknown_family_exits_two():
    assert main(["membership", "--family", "nope", "--lambda", "0.5"]) == 2


def test_numerical_failure_exits_three(capsys):
    # a2 = 2 with lambda = 1 puts a pole of f at z = 0.5, which the
    # construction-time cross-check hits.
    code = main(["membership", "--family", "from_omega", "--lambda", "1.0",
                 "--a2", "2.0", "--omega", "0*z"])
    assert code == 3


def test_spec_json_descriptor(tmp_path):
    code, payload = run(["membership", "--spec",
                         '{"family": "f_theta", "lambda": 0.4, "theta": 0.0}',
                         "--against", "0.3"], tmp_path)
    assert code == 0
    assert payload["result"]["verdict"] == "OUT"


# -- determinism -------------------------------------------------------------------

def test_byte_deterministic_reports(tmp_path):
    args = ["coeffs", "--family", "g", "--order", "8"]
    _, first = run(args, tmp_path, "a.json")
    _, second = run(args, tmp_path, "b.json")
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert first == second


# -- individual commands --------------------------------------------------------------

def test_coeffs_bounds_and_u_series(tmp_path, envelope_schema):
    code, payload = run(["coeffs", "--family", "f_theta", "--lambda", "0.5",
                         "--theta", "0", "--order", "12"], tmp_path)
    assert code == 0
    jsonschema.validate(payload, envelope_schema)
    rows = payload["result"]["coefficients"]
    assert all(row["within_bound"] for row in rows)
    assert abs(rows[1]["a_n"][0] - 1.75) < 1e-10


def test_counterexample_point(tmp_path):
    code, payload = run(["counterexample", "--lambda", "0.15", "--a", "0.5"],
                        tmp_path)
    assert code == 0
    res = payload["result"]
    assert res["excess"] > 0.0
    assert res["oracle_gap"] < 1e-8
    assert abs(res["bound"] - 1.1725) < 1e-12


def test_counterexample_scan_brackets_threshold(tmp_path):
    code, payload = run(["counterexample", "--scan",
                         "--csv", str(tmp_path / "scan.csv")], tmp_path)
    assert code == 0
    res = payload["result"]
    lo, hi = res["threshold_bracket"]
    assert 0.289 <= lo <= res["delta_reference"] <= hi <= 0.300
    header = (tmp_path / "scan.csv").read_text().splitlines()[0]
    assert header == "lambda,a,a3,bound,excess"


def test_convexity_command(tmp_path):
    code, payload = run(["convexity", "--family", "f_theta", "--lambda", "0.5",
                         "--theta", "0", "--gamma", "0"], tmp_path)
    assert code == 0
    cert = payload["result"]["certificates"][0]
    assert cert["status"] == "CERTIFIED"


def test_subordination_command(tmp_path):
    code, payload = run(["subordination", "--family", "example32",
                         "--lambda", "0.5", "--k", "2"], tmp_path)
    assert code == 0
    res = payload["result"]
    assert res["status"] == "NOT_SUBORDINATE"
    assert res["witness_kind"] is not None


def test_blaschke_command(tmp_path):
    code, payload = run(["blaschke", "--kind", "B1"], tmp_path)
    assert code == 0
    res = payload["result"]
    assert res["julia"]["classification"] == "FINITE"
    assert res["gsum_final"] <= 4.0 * 3.14159265358979 ** 2 / 45.0 + 1e-6


def test_harmonic_command(tmp_path):
    code, payload = run(["harmonic", "--lambda", "0.3", "--omega", "z",
                         "--dilatation", "0.18*z"], tmp_path)
    assert code == 0
    res = payload["result"]
    assert res["T42"]["status"] == "CERTIFIED"
    assert res["T43"]["status"] == "CERTIFIED"
    assert res["jacobian_grid_min"] > 0.0


def test_render_identity_circle(tmp_path):
    svg = tmp_path / "c.svg"
    csv = tmp_path / "c.csv"
    code, payload = run(["render", "--family", "from_omega", "--lambda", "0.5",
                         "--omega", "0*z", "--radius", "0.5", "--samples", "64",
                         "--svg", str(svg), "--csv", str(csv)], tmp_path)
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "t,re_f,im_f"
    t0 = lines[1].split(",")
    assert float(t0[0]) == 0.0 and float(t0[1]) == 0.5 and float(t0[2]) == 0.0
    root = ET.fromstring(svg.read_text())
    assert root.tag.endswith("svg")
    assert any(child.tag.endswith("polyline") for child in root.iter())


def test_render_png_written(tmp_path):
    png = tmp_path / "c.png"
    code, _ = run(["render", "--family", "g", "--radius", "0.9",
                   "--samples", "128", "--png", str(png)], tmp_path)
    assert code == 0
    assert png.stat().st_size > 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
