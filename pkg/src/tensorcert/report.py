"""Certification runs, JSON reports and parameter sweeps."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np
from scipy import stats

from . import __version__
from .errors import BudgetExceeded, ConvergenceError
from .fmax_estimate import heuristic_fmax
from .lower_qtensor import calibrate_and_build, verify_certificate
from .quotient import cert_upper_qd
from .spectral import DEFAULT_TOL
from .tensor_model import DenseTensor, sample_tensor
from .upper_even import cert_upper_even
from .upper_odd3 import cert_upper_odd3

SCHEMA = "tensorcert.report/1"
CSV_COLUMNS = ["n", "d", "q", "seed", "upper", "lower", "fmax_est", "ratio_upper", "c2", "runtime_ms"]
SANDWICH_TOL = 1e-6


def resolve_threads(flag: int | None) -> int:
    if flag is not None:
        return max(1, flag)
    env = os.environ.get("TSC_THREADS")
    return max(1, int(env)) if env else 1


def check_request(d: int, q: int, which: str, n: int | None = None) -> None:
    """Raise ``ValueError`` for combinations no certifier supports."""
    if which not in ("upper", "lower", "both"):
        raise ValueError(f"which must be upper, lower or both, got {which!r}")
    if d % 2 and d != 3:
        raise ValueError(f"odd d={d} is unsupported; only d=3 has an odd-order certificate")
    if q <= 0 or q % 2:
        raise ValueError(f"q must be a positive even integer, got {q}")
    if which in ("upper", "both"):
        if d % 2 == 0:
            if q % d:
                raise ValueError(f"even d={d} needs q divisible by d, got q={q}")
        elif d == 3:
            if q % 4:
                raise ValueError(f"d=3 needs q divisible by 4, got q={q}")
        else:
            raise ValueError(f"odd d={d} is unsupported; only d=3 has an odd-order certificate")
    if which in ("lower", "both"):
        if q != d or d % 2:
            raise ValueError(f"lower bounds need q == d with d even, got d={d}, q={q}")
        if n is not None and q > n:
            raise ValueError(f"lower bounds need q <= n, got q={q}, n={n}")


def certify(A: DenseTensor, q: int, which: str = "upper", tol: float = DEFAULT_TOL,
            max_iter: int | None = None, fmax_restarts: int = 50, seed: int = 0,
            include_timing: bool = False) -> dict:
    """Run every applicable certifier on ``A`` and assemble a report.

    Wall-clock fields are only added with ``include_timing``; without them the
    report is a deterministic function of the tensor and the arguments.
    """
    d, n = A.order, A.dim
    check_request(d, q, which, n)
    results: dict[str, dict] = {}
    timings: dict[str, float] = {}

    def timed(name, fn):
        t0 = time.perf_counter()
        out = fn()
        timings[name] = round((time.perf_counter() - t0) * 1000, 3)
        return out

    if which in ("upper", "both"):
        if d % 2 == 0:
            results["upper_even"] = timed(
                "upper_even", lambda: cert_upper_even(A, q, tol=tol, max_iter=max_iter, seed=seed))
            if q == d:
                lam = timed("upper_qd", lambda: cert_upper_qd(A, q, tol=tol, seed=seed))
                results["upper_qd"] = {"op": "quotient.cert_upper_qd", "bound": lam, "tol": tol}
        else:
            results["upper_odd3"] = timed(
                "upper_odd3", lambda: cert_upper_odd3(A, q, tol=tol, max_iter=max_iter, seed=seed))
    if which in ("lower", "both"):
        cert = timed("lower_qd", lambda: calibrate_and_build(A, q))
        ver = verify_certificate(cert, A)
        entry = {"op": "lower_qtensor.calibrate_and_build", "bound": cert.inner_value,
                 "tol": cert.psd_tol, "verified": ver.ok, "verify_reasons": ver.reasons}
        entry.update(cert.to_json())
        results["lower_qd"] = entry
    est = timed("fmax_est", lambda: heuristic_fmax(A, restarts=fmax_restarts, seed=seed))
    results["fmax_est"] = {"op": "fmax_estimate.heuristic_fmax", "value": est.value,
                           "restarts": est.restarts, "iterations": est.iterations,
                           "converged": est.converged, "certified": False}

    uppers = {k: v["bound"] for k, v in results.items() if k.startswith("upper")}
    ratios = {f"{k}/fmax_est": (b / est.value if est.value > 0 else None) for k, b in uppers.items()}
    if "lower_qd" in results and est.value > 0:
        ratios["lower_qd/fmax_est"] = results["lower_qd"]["bound"] / est.value
    violations = []
    for k, b in uppers.items():
        if est.value > b + SANDWICH_TOL:
            violations.append(f"fmax_est {est.value} exceeds {k} {b}")
    if "lower_qd" in results:
        lo = results["lower_qd"]["bound"]
        for k, b in uppers.items():
            if lo > b + SANDWICH_TOL:
                violations.append(f"lower_qd {lo} exceeds {k} {b}")
        if not results["lower_qd"]["verified"]:
            violations.append("lower certificate failed verification")

    instance = {"n": n, "d": d, "q": q, "model": A.model, "seed": A.seed}
    config = {"which": which, "tol": tol, "max_iter": max_iter,
              "fmax_restarts": fmax_restarts, "solver_seed": seed}
    ident = json.dumps({"instance": instance, "config": config, "version": __version__},
                       sort_keys=True)
    report = {
        "schema": SCHEMA,
        "tool_version": __version__,
        "run_id": hashlib.sha256(ident.encode()).hexdigest()[:16],
        "instance": instance,
        "config": config,
        "results": results,
        "ratios": ratios,
        "best_upper": min(uppers.values()) if uppers else None,
        "invariant_violations": violations,
    }
    if include_timing:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
        report["timings_ms"] = timings
    return report


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def fit_slope(xs, ys) -> dict:
    """Least-squares slope of ``log y`` against ``log x`` with its standard error."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    if lx.size < 2:
        raise ValueError("need at least two points to fit a slope")
    res = stats.linregress(lx, ly)
    return {"slope": float(res.slope), "stderr": float(res.stderr), "intercept": float(res.intercept)}


def _sweep_row(n, d, q, seed, cfg) -> dict:
    t0 = time.perf_counter()
    row = {c: None for c in CSV_COLUMNS}
    row.update(n=n, d=d, q=q, seed=seed)
    try:
        A = sample_tensor(n, d, cfg.get("model", "rademacher"), seed)
        rep = certify(A, q, cfg.get("which", "upper"), tol=cfg.get("tol", DEFAULT_TOL),
                      max_iter=cfg.get("max_iter"), fmax_restarts=cfg.get("fmax_restarts", 10))
        res = rep["results"]
        row["upper"] = rep["best_upper"]
        row["fmax_est"] = res["fmax_est"]["value"]
        if "lower_qd" in res:
            row["lower"] = res["lower_qd"]["bound"]
            row["c2"] = res["lower_qd"]["c2"]
        if row["upper"] is not None and row["fmax_est"] > 0:
            row["ratio_upper"] = row["upper"] / row["fmax_est"]
        if rep["invariant_violations"]:
            row["error"] = "; ".join(rep["invariant_violations"])
            row["invariant_violation"] = True
    except (ValueError, BudgetExceeded, ConvergenceError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    row["runtime_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    return row


def run_sweep(cfg: dict, threads: int = 1) -> tuple[list[dict], dict]:
    """Run one record per ``(n, q, trial)``; failures are recorded per row.

    ``cfg`` keys: ``n`` (list), ``d``, ``q`` (int or list), ``trials``,
    ``seed_base``, and optionally ``model``, ``which``, ``tol``, ``max_iter``,
    ``fmax_restarts``.  Trial ``t`` uses seed ``seed_base + t``.
    """
    ns = list(cfg["n"])
    d = int(cfg["d"])
    qs = cfg["q"] if isinstance(cfg["q"], list) else [cfg["q"]]
    trials = int(cfg.get("trials", 1))
    base = int(cfg.get("seed_base", 0))
    jobs = [(n, d, q, base + t) for q in qs for n in ns for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        rows = list(pool.map(lambda job: _sweep_row(*job, cfg), jobs))
    return rows, summarize(rows)


def summarize(rows: list[dict]) -> dict:
    out = {"groups": [], "slopes": {}}
    keys = sorted({(r["q"], r["n"]) for r in rows})
    for q, n in keys:
        grp = [r for r in rows if r["q"] == q and r["n"] == n]
        entry = {"q": q, "n": n, "rows": len(grp),
                 "failures": sum(1 for r in grp if r.get("error"))}
        for col in ("upper", "lower", "fmax_est", "ratio_upper"):
            vals = [r[col] for r in grp if r[col] is not None]
            entry[f"median_{col}"] = float(np.median(vals)) if vals else None
        out["groups"].append(entry)
    for q in sorted({q for q, _ in keys}):
        grp = [g for g in out["groups"] if g["q"] == q]
        for col in ("upper", "lower", "fmax_est"):
            pts = [(g["n"], g[f"median_{col}"]) for g in grp
                   if g[f"median_{col}"] is not None and g[f"median_{col}"] > 0]
            if len(pts) >= 2:
                out["slopes"][f"q={q}:{col}"] = fit_slope(*zip(*pts))
    return out


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r[k] is None else r[k]) for k in CSV_COLUMNS})
    return buf.getvalue()


def rows_to_jsonl(rows: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
