#!/usr/bin/env python3
"""
End-to-end tests of the command-line harness: reports and exit codes
"""
import json
import logging
import os
import sys

import pytest

logging.basicConfig(level=logging.DEBUG, format='%(levelname)s - %(name)s - %(message)s')

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from berezin_workbench.cli import run


def write_config(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_quantize_json_to_stdout(tmp_path, capsys):
    config = write_config(tmp_path, "q.cfg", "poly = z1\ntwo_j = 1\n")
    assert run(["quantize", "--config", config]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dim"] == 2
    assert payload["matrix"][0][0][0] == pytest.approx(1 / 3)
    assert payload["matrix"][1][1][0] == pytest.approx(-1 / 3)
    assert payload["spectral_norm"] == pytest.approx(1 / 3)
    assert payload["config"] == {"poly": "z1", "sites": 1, "two_j": 1}


def test_quantize_csv_to_file(tmp_path):
    config = write_config(tmp_path, "q.cfg", "poly = x1\ntwo_j = 1\n")
    out = tmp_path / "reports" / "q.csv"
    assert run(["quantize", "--config", config, "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "row,col,re,im"
    assert len(lines) == 5
    assert lines[2].startswith("0,1,0.333333333333")


def test_quantize_bad_polynomial_is_input_error(tmp_path, capsys):
    config = write_config(tmp_path, "q.cfg", "poly = x1 +\ntwo_j = 2\n")
    assert run(["quantize", "--config", config]) == 2
    assert "byte offset" in capsys.readouterr().err


def test_quantize_over_dimension_cap(tmp_path):
    config = write_config(tmp_path, "q.cfg", "poly = x1*x2*x3\nsites = 3\ntwo_j = 16\n")
    assert run(["quantize", "--config", config]) == 3


def test_sweep_writes_table_and_fit_sidecar(tmp_path):
    config = write_config(tmp_path, "dgr.cfg", "observable = dgr\nrange = 10,20,40,80\nf = x1\ng = y1\n")
    out = tmp_path / "dgr.csv"
    assert run(["sweep", "--config", config, "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "J,dgr_defect"
    assert len(lines) == 5
    fit = json.loads((tmp_path / "dgr.csv.fit.json").read_text(encoding="utf-8"))
    assert fit["column"] == "dgr_defect"
    assert -1.0 < fit["exponent"] < -0.8


def test_sweep_json_without_fit(tmp_path, capsys):
    config = write_config(tmp_path, "cw.cfg", "observable = cw_defect\nrange = 2,4\nB = 0.5\nscaling = rescaled\nfit = false\n")
    assert run(["sweep", "--config", config, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["parameter_name"] == "d"
    assert payload["fit"] is None
    assert payload["rows"][0]["values"]["cw_defect"] == pytest.approx(0.1)


def test_sweep_cw_defect_defaults_to_per_site(tmp_path, capsys):
    config = write_config(tmp_path, "cw.cfg", "observable = cw_defect\nrange = 2,4\nfit = false\n")
    assert run(["sweep", "--config", config, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    # d = 2: -Q(z^2)/2 = diag(-0.2, -0.1, -0.2) against -S_z^2/2 = diag(-0.5, 0, -0.5)
    assert payload["rows"][0]["values"]["cw_defect"] == pytest.approx(0.3, rel=1e-10)


def test_norm_limit_on_long_chain_is_a_cap(tmp_path, capsys):
    config = write_config(tmp_path, "nl.cfg", "observable = norm_limit\nmodel = ising\nd = 5\nrange = 1\nfit = false\n")
    assert run(["sweep", "--config", config]) == 3
    assert "classical sup norm" in capsys.readouterr().err


def test_kms_product_check_passes(tmp_path):
    config = write_config(tmp_path, "kms.cfg", "mode = product\ndims = 2,3\nseed = 7\nsamples = 5\n")
    assert run(["kms", "--config", config, "--check", "--out", str(tmp_path / "kms.json")]) == 0
    payload = json.loads((tmp_path / "kms.json").read_text(encoding="utf-8"))
    assert payload["passed"] is True
    assert payload["residuals"]["max_residual"] <= 1e-9


def test_kms_mixed_state_fails_only_in_check_mode(tmp_path):
    config = write_config(tmp_path, "mixed.cfg", "mode = mixed\ndims = 3\nnorm = 2\n")
    assert run(["kms", "--config", config, "--check", "--out", str(tmp_path / "a.json")]) == 1
    assert run(["kms", "--config", config, "--out", str(tmp_path / "b.json")]) == 0
    payload = json.loads((tmp_path / "b.json").read_text(encoding="utf-8"))
    assert payload["passed"] is False


def test_resolvent_canonical_sample(tmp_path):
    config = write_config(tmp_path, "res.cfg", "h1 = 0,1\nh2 = 0,2\nlambda = 1\nnodes = 16,32,64,128,256\n")
    out = tmp_path / "res.csv"
    assert run(["resolvent", "--config", config, "--check", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "M,error"
    assert float(lines[-1].split(",")[1]) <= 1e-8


def test_resolvent_tight_tolerance_fails_check(tmp_path):
    config = write_config(tmp_path, "res.cfg", "h1 = 0,1\nh2 = 0,2\nlambda = 1\nnodes = 8\ntolerance = 1e-12\n")
    assert run(["resolvent", "--config", config, "--check", "--format", "json", "--out", str(tmp_path / "r.json")]) == 1


def test_input_errors(tmp_path):
    assert run(["resolvent", "--config", str(tmp_path / "missing.cfg")]) == 2
    config = write_config(tmp_path, "res.cfg", "h1 = 0,1\nh2 = 0,2\nlambda = 0\n")
    assert run(["resolvent", "--config", config]) == 2
    assert run(["transmogrify", "--config", config]) == 2
    assert run([]) == 2


def test_reports_are_deterministic(tmp_path):
    config = write_config(tmp_path, "kms.cfg", "mode = product\ndims = 3,2\nbeta = 0.5\nseed = 11\n")
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    assert run(["kms", "--config", config, "--out", str(first)]) == 0
    assert run(["kms", "--config", config, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_config_output_settings_are_used(tmp_path):
    out = tmp_path / "from_config.json"
    config = write_config(tmp_path, "q.cfg", f"poly = 1\ntwo_j = 3\nout = {out}\nformat = json\n")
    assert run(["quantize", "--config", config]) == 0
    assert json.loads(out.read_text(encoding="utf-8"))["dim"] == 4


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
