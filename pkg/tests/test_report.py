import json

import numpy as np
import pytest

from tensorcert import report
from tensorcert.tensor_model import sample_tensor


def test_dispatch_rules():
    r = report.certify(sample_tensor(5, 4, "rademacher", 1), 8, "upper", fmax_restarts=3)
    assert set(r["results"]) == {"upper_even", "fmax_est"}
    r = report.certify(sample_tensor(5, 4, "rademacher", 1), 4, "both", fmax_restarts=3)
    assert {"upper_qd", "lower_qd"} <= set(r["results"])
    assert r["results"]["lower_qd"]["bound"] <= r["results"]["upper_qd"]["bound"] + 1e-6
    r = report.certify(sample_tensor(5, 3, "rademacher", 1), 4, "upper", fmax_restarts=3)
    assert set(r["results"]) == {"upper_odd3", "fmax_est"}


@pytest.mark.parametrize("d, q, which", [(5, 4, "upper"), (4, 8, "lower"), (3, 4, "lower"),
                                         (4, 6, "upper"), (3, 6, "upper"), (4, 4, "sideways")])
def test_unsupported_requests(d, q, which):
    with pytest.raises(ValueError):
        report.check_request(d, q, which)


def test_bounds_are_tagged():
    r = report.certify(sample_tensor(5, 4, "rademacher", 2), 4, "both", fmax_restarts=3)
    for name, entry in r["results"].items():
        assert "op" in entry
        if name != "fmax_est":
            assert "tol" in entry and "bound" in entry
    assert r["schema"] == report.SCHEMA
    assert r["results"]["fmax_est"]["certified"] is False


def test_report_is_byte_stable():
    A = sample_tensor(5, 4, "rademacher", 3)
    a = report.dumps_report(report.certify(A, 4, "both", fmax_restarts=4))
    b = report.dumps_report(report.certify(sample_tensor(5, 4, "rademacher", 3), 4, "both",
                                           fmax_restarts=4))
    assert a == b
    assert "timestamp" not in a
    timed = report.certify(A, 4, "upper", fmax_restarts=2, include_timing=True)
    assert "timestamp" in timed and "timings_ms" in timed


def test_fit_slope_exact_power_law():
    n = np.array([10, 14, 20, 28, 40])
    fit = report.fit_slope(n, 3.0 * n)
    assert fit["slope"] == pytest.approx(1.0, abs=0.01)
    assert fit["stderr"] < 0.01
    with pytest.raises(ValueError):
        report.fit_slope([1], [1])


def test_sweep_rows_and_summary():
    cfg = {"n": [5, 6], "d": 4, "q": 4, "trials": 3, "seed_base": 0, "which": "both",
           "fmax_restarts": 3}
    rows, summary = report.run_sweep(cfg, threads=2)
    assert len(rows) == 6
    assert [(r["n"], r["seed"]) for r in rows] == [(5, 0), (5, 1), (5, 2), (6, 0), (6, 1), (6, 2)]
    assert len(summary["groups"]) == 2 and "q=4:upper" in summary["slopes"]
    csv_text = report.rows_to_csv(rows)
    assert csv_text.splitlines()[0] == "n,d,q,seed,upper,lower,fmax_est,ratio_upper,c2,runtime_ms"
    assert len(csv_text.splitlines()) == 7
    assert all(json.loads(line)["n"] in (5, 6) for line in report.rows_to_jsonl(rows).splitlines())


def test_sweep_records_failures_and_continues():
    cfg = {"n": [3, 5], "d": 4, "q": 4, "trials": 1, "which": "lower", "fmax_restarts": 2}
    rows, summary = report.run_sweep(cfg)
    assert "error" in rows[0] and rows[0]["lower"] is None  # q > n
    assert "error" not in rows[1] and rows[1]["lower"] is not None
    assert summary["groups"][0]["failures"] == 1


def test_thread_resolution(monkeypatch):
    monkeypatch.setenv("TSC_THREADS", "3")
    assert report.resolve_threads(None) == 3
    assert report.resolve_threads(2) == 2
    monkeypatch.delenv("TSC_THREADS")
    assert report.resolve_threads(None) == 1
