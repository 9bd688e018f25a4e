import json
import os
import tempfile

import numpy as np
import pytest

from hermitia.cli import main
from hermitia.metric import separable_kahler_torus, write_torus_metric


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def _json(capsys, *argv):
    code, out = _run(capsys, *argv)
    return code, json.loads(out)


def test_curvature_annulus_ricci2(capsys):
    code, rep = _json(capsys, "curvature", "--metric", "hopf", "--dim", "2",
                      "--point", "1,0,0,0", "--connection", "chern",
                      "--what", "ricci2")
    assert code == 0
    m = rep["results"][0]["ricci2"]
    got = np.array([[c["re"] + 1j * c["im"] for c in row] for row in m])
    assert np.allclose(got, np.eye(2), atol=1e-10)
    assert rep["version"]
    assert "seed" in rep and "config" in rep


def test_curvature_flat_all_zero(capsys):
    code, rep = _json(capsys, "curvature", "--metric", "flat", "--dim", "3",
                      "--point", "0,0,0,0,0,0", "--what", "all")
    assert code == 0
    t = np.array(json.dumps(rep["results"][0]["tensor"]).count('"re": 0.0'))
    r1 = rep["results"][0]["ricci1"]
    flat = [c for row in r1 for c in row]
    assert all(abs(c["re"]) < 1e-12 and abs(c["im"]) < 1e-12 for c in flat)


def test_curvature_deterministic_sampling(capsys):
    args = ("curvature", "--metric", "normal-form", "--dim", "2", "--sample",
            "5", "--seed", "7", "--what", "scalars")
    code1, rep1 = _json(capsys, *args)
    code2, rep2 = _json(capsys, *args)
    assert code1 == code2 == 0
    assert rep1["results"] == rep2["results"]


def test_check_verdicts(capsys):
    code, rep = _json(capsys, "check", "--metric", "hopf", "--dim", "2",
                      "--sample", "20")
    assert code == 0
    r = rep["results"]
    assert (r["kahler"], r["balanced"], r["skt"]) == (False, False, True)
    code, rep = _json(capsys, "check", "--metric", "hopf", "--dim", "3",
                      "--sample", "20")
    assert rep["results"]["skt"] is False
    code, rep = _json(capsys, "check", "--metric", "flat", "--dim", "2")
    r = rep["results"]
    assert r["kahler"] and r["balanced"] and r["skt"]


def test_verify_appendix_pass(capsys):
    code, rep = _json(capsys, "verify", "--suite", "appendix", "--metric",
                      "hopf", "--dim", "2", "--trials", "5", "--sample", "1",
                      "--tol", "1e-9")
    assert code == 0
    assert rep["results"]["pass"] is True


def test_verify_hopf_oracle(capsys):
    code, rep = _json(capsys, "verify", "--suite", "hopf-oracle", "--dim",
                      "3", "--points", "10")
    assert code == 0
    assert "b1_matches=corrected" in rep["results"]["trace_form_matches"]


def test_verify_failure_exit_code(capsys):
    code, rep = _json(capsys, "verify", "--suite", "hopf-oracle", "--dim",
                      "3", "--points", "5", "--tol", "1e-18")
    assert code == 1
    assert rep["results"]["pass"] is False


def test_flow_hopf_ode_fixed_point(capsys):
    code, rep = _json(capsys, "flow", "--hopf-ode", "--dim", "2", "--mu",
                      "0.25", "--c0", "1", "--T", "1")
    assert code == 0
    series = rep["results"]["series"]
    assert all(abs(p["c"] - 1.0) < 1e-12 for p in series)
    assert rep["results"]["extinction_time"] is None


def test_flow_flat_grid(capsys):
    code, rep = _json(capsys, "flow", "--metric", "flat", "--grid", "8",
                      "--mu", "0.1", "--T", "0.01", "--cadence", "100")
    assert code == 0
    assert abs(rep["results"]["final_t"] - 0.01) < 1e-12


def test_flow_metric_file_kahler(capsys):
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "kahler.txt")
        write_torus_metric(separable_kahler_torus(2, 5), path)
        code, rep = _json(capsys, "flow", "--metric-file", path, "--grid",
                          "12", "--mu", "0", "--T", "0.002", "--cadence", "5")
    assert code == 0
    assert rep["results"]["max_kahler_defect"] <= 1e-6


def test_usage_errors(capsys):
    code = main(["curvature", "--dim", "2"])  # no metric source
    assert code == 2
    code = main(["nonsense"])
    assert code == 2


def test_domain_error_exit(capsys):
    code = main(["curvature", "--metric", "hopf", "--dim", "2", "--point",
                 "0,0,0,0"])
    assert code == 3


def test_csv_format(capsys):
    code, out = _run(capsys, "check", "--metric", "flat", "--dim", "2",
                     "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "key,value_or_re,im"
