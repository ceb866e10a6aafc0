"""Release-gate invariant suites, run at pinned seeds by ``tensorcert verify``.

Each check raises ``AssertionError`` with a message on failure.  Checks look
up helpers through their module (``wigner.catalan`` rather than an imported
name) so that patching a module attribute is seen by the suite.
"""
from __future__ import annotations

import time
from typing import Callable, NamedTuple

import numpy as np

from . import fmax_estimate, index_core, lower_qtensor, quotient, spectral
from . import tensor_model, upper_even, upper_odd3, wigner

SEED = 20240611


class CheckResult(NamedTuple):
    suite: str
    name: str
    passed: bool
    seconds: float
    message: str


def _random_sos(n, k, rng):
    labels, ncls = index_core.tuple_pair_classes(n, k)
    vals = rng.standard_normal(ncls)
    return index_core.SymMatrix(vals[labels], n, k, "tuple", "sos-symmetric")


# index_core ------------------------------------------------------------

def check_orbit_partition():
    for n, k in [(1, 3), (3, 2), (4, 3), (5, 2)]:
        t = index_core.index_table(n, k)
        assert int(t.orbit_sizes.sum()) == n**k, f"orbit sizes of [{n}]^{k} do not sum to n^k"
        assert np.bincount(t.tuple_ids).tolist() == t.orbit_sizes.tolist()


def check_sos_symmetrize():
    rng = np.random.default_rng(SEED)
    n, k = 3, 2
    M = index_core.SymMatrix(rng.standard_normal((n**k, n**k)), n, k)
    S = index_core.sos_symmetrize(M)
    assert index_core.is_sos_symmetric(S, 1e-12), "projection is not SoS-symmetric"
    assert np.array_equal(index_core.sos_symmetrize(S).entries, S.entries), "not idempotent"
    for _ in range(5):
        y = index_core.tensor_power(rng.standard_normal(n), k)
        a, b = y @ M.entries @ y, y @ S.entries @ y
        assert abs(a - b) <= 1e-10 * (1 + abs(a)), "polynomial changed by symmetrization"


# tensor_model ------------------------------------------------------------

def check_flatten_roundtrip():
    A = tensor_model.sample_tensor(3, 4, "gaussian", SEED)
    B = tensor_model.unflatten(tensor_model.flatten(A))
    assert np.array_equal(A.entries, B.entries)


def check_evaluate_forms():
    A = tensor_model.sample_tensor(3, 4, "rademacher", SEED)
    x = np.random.default_rng(SEED).standard_normal(3)
    direct = tensor_model.evaluate(A, x)
    F = tensor_model.flatten(A).entries
    y = index_core.tensor_power(x, 2)
    coef = tensor_model.evaluate_coefficients(tensor_model.coefficients(A), x)
    assert abs(direct - y @ F @ y) < 1e-10 and abs(direct - coef) < 1e-10


# wigner ------------------------------------------------------------------

def check_hankel():
    for k in range(9):
        H = wigner.hankel_matrix(k)
        C = wigner.hankel_from_catalan(k)
        assert (H == C).all(), f"R^T R differs from the Catalan Hankel matrix at k={k}"


def check_wigner_min_eig():
    for n, q in [(1, 8), (2, 6), (3, 4), (5, 2)]:
        W = wigner.wigner_hat(n, q)
        lam = np.linalg.eigvalsh(W.astype(float))[0]
        assert lam >= 0.5 - 1e-9, f"lambda_min(W_hat) = {lam} for n={n}, q={q}"
        assert W.min() >= 0 and W.max() <= 2**q


# spectral ----------------------------------------------------------------

def check_operator_matches_dense():
    rng = np.random.default_rng(SEED)
    X = rng.standard_normal((200, 200))
    X = (X + X.T) / 2
    dense = np.linalg.eigvalsh(X)[-1]
    lanczos = spectral.lambda_max(spectral.as_operator(X), seed=1)
    assert abs(dense - lanczos.value) <= 1e-8 * max(1, abs(dense))
    v = lanczos.vector
    assert abs(v @ X @ v / (v @ v) - lanczos.value) <= 1e-8 * max(1, abs(dense))


# quotient ----------------------------------------------------------------

def check_quotient_domination():
    rng = np.random.default_rng(SEED)
    for n, k in [(2, 2), (3, 2), (2, 3), (4, 1)]:
        for _ in range(5):
            M = _random_sos(n, k, rng)
            lm, lq, ok = quotient.norm_dominates(M, quotient.quotient_matrix(M))
            assert ok, f"lambda_max(M)={lm} exceeds lambda_max(Q)={lq}"


def check_quotient_routes():
    A = tensor_model.sample_tensor(4, 4, "rademacher", SEED)
    fast = quotient.quotient_of_tensor(A).entries
    slow = quotient.quotient_matrix(quotient.sos_representation(A)).entries
    assert np.allclose(fast, slow, atol=1e-12)


# upper_even --------------------------------------------------------------

def check_representation_identity():
    n = 4
    A = tensor_model.sample_tensor(n, 4, "rademacher", SEED)
    op = upper_even.SymmetrizedPowerOp(upper_even.symmetric_flattening(A), 2, n, 4)
    rng = np.random.default_rng(SEED)
    for _ in range(5):
        x = rng.standard_normal(n)
        y = index_core.tensor_power(x, 4)
        f = tensor_model.evaluate(A, x)
        assert abs(y @ op.matvec(y) - f**2) <= 1e-8 * max(1, f**2)


# upper_odd3 --------------------------------------------------------------

def check_odd_pipeline():
    A = tensor_model.sample_tensor(4, 3, "rademacher", SEED)
    st = upper_odd3.build_odd_state(A, 4)
    rng = np.random.default_rng(SEED)
    for _ in range(5):
        x = rng.standard_normal(4)
        y = index_core.tensor_power(x, 2)
        g = sum((x @ T @ x) ** 2 for T in st.slices)
        assert abs(y @ st.calT @ y - g) <= 1e-9 * max(1, g)
        assert abs(y @ st.E @ y - y @ st.E_prime @ y) <= 1e-9 * max(1, g)


# sandwich ----------------------------------------------------------------

def check_sandwich():
    for n, d, q in [(5, 4, 4), (4, 4, 8), (5, 3, 4)]:
        A = tensor_model.sample_tensor(n, d, "rademacher", SEED)
        est = fmax_estimate.heuristic_fmax(A, restarts=10, seed=SEED)
        uppers = []
        if d == 3:
            uppers.append(upper_odd3.cert_upper_odd3(A, q)["bound"])
        else:
            uppers.append(upper_even.cert_upper_even(A, q)["bound"])
            if q == d:
                uppers.append(quotient.cert_upper_qd(A))
        for b in uppers:
            assert est.value <= b + 1e-6, f"fmax estimate {est.value} above bound {b}"
        if d == 4 and q == 4:
            cert = lower_qtensor.calibrate_and_build(A, q)
            assert cert.inner_value <= min(uppers) + 1e-6
            ver = lower_qtensor.verify_certificate(cert, A)
            assert ver.ok, "; ".join(ver.reasons)


def check_fmax_restart_monotone():
    A = tensor_model.sample_tensor(5, 4, "gaussian", SEED)
    a = fmax_estimate.heuristic_fmax(A, restarts=4, seed=SEED).value
    b = fmax_estimate.heuristic_fmax(A, restarts=8, seed=SEED).value
    assert b >= a, f"8 restarts gave {b} < 4 restarts {a}"


SUITES: dict[str, list[Callable[[], None]]] = {
    "index_core": [check_orbit_partition, check_sos_symmetrize],
    "tensor_model": [check_flatten_roundtrip, check_evaluate_forms],
    "wigner": [check_hankel, check_wigner_min_eig],
    "spectral": [check_operator_matches_dense],
    "quotient": [check_quotient_domination, check_quotient_routes],
    "upper_even": [check_representation_identity],
    "upper_odd3": [check_odd_pipeline],
    "sandwich": [check_sandwich, check_fmax_restart_monotone],
}


def run_all(suites: dict | None = None) -> list[CheckResult]:
    out = []
    for suite, checks in (suites or SUITES).items():
        for fn in checks:
            name = fn.__name__.removeprefix("check_")
            t0 = time.perf_counter()
            try:
                fn()
                ok, msg = True, ""
            except Exception as exc:  # a crash is a failed invariant too
                ok, msg = False, f"{type(exc).__name__}: {exc}"
            out.append(CheckResult(suite, name, ok, time.perf_counter() - t0, msg))
    return out


def format_table(results: list[CheckResult]) -> str:
    width = max(len(f"{r.suite}.{r.name}") for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status}  {r.suite + '.' + r.name:<{width}}  {r.seconds * 1000:9.1f} ms"
        if r.message:
            line += f"  {r.message}"
        lines.append(line)
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)
