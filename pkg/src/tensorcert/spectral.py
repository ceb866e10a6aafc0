"""Extreme eigenvalues (dense and matrix-free) and PSD tests."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, aslinearoperator, eigsh

from .errors import BudgetExceeded, ConvergenceError
from .index_core import DENSE_LIMIT

DEFAULT_TOL = 1e-8

# Operators this small are materialized and solved densely.
SMALL_OPERATOR = 64


class Eigenpair(NamedTuple):
    value: float
    vector: np.ndarray
    residual: float
    method: str
    iterations: int


class PSDResult(NamedTuple):
    ok: bool
    min_eig: float
    tol: float
    method: str


def _as_array(M) -> np.ndarray | None:
    if isinstance(M, LinearOperator):
        return None
    return np.asarray(M, dtype=float)


def as_operator(M) -> LinearOperator:
    """Wrap a dense matrix as a symmetric ``LinearOperator``."""
    if isinstance(M, LinearOperator):
        return M
    return aslinearoperator(np.asarray(M, dtype=float))


def _materialize(op: LinearOperator) -> np.ndarray:
    return op.matmat(np.eye(op.shape[0]))


def _dense_extreme(A: np.ndarray, largest: bool) -> Eigenpair:
    w, V = np.linalg.eigh(A)
    i = -1 if largest else 0
    v = V[:, i]
    lam = float(w[i])
    res = float(np.linalg.norm(A @ v - lam * v))
    return Eigenpair(lam, v, res, "dense-eigh", 1)


def _extreme(M, largest: bool, tol: float, max_iter: int | None, seed: int) -> Eigenpair:
    A = _as_array(M)
    if A is not None:
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"need a square matrix, got shape {A.shape}")
        if A.shape[0] <= DENSE_LIMIT:
            return _dense_extreme(A, largest)
        op = aslinearoperator(A)
    else:
        op = M
    dim = op.shape[0]
    if dim <= SMALL_OPERATOR:
        return _dense_extreme(_materialize(op), largest)

    counter = {"n": 0}

    def matvec(v):
        counter["n"] += 1
        return op.matvec(v)

    counted = LinearOperator(op.shape, matvec=matvec, dtype=float)
    v0 = np.random.default_rng(seed).standard_normal(dim)
    max_iter = 10 * dim if max_iter is None else max_iter
    try:
        w, V = eigsh(counted, k=1, which="LA" if largest else "SA", v0=v0,
                     tol=tol / 10, maxiter=max_iter)
    except ArpackNoConvergence as exc:
        raise ConvergenceError(f"Lanczos did not converge in {max_iter} restarts") from exc
    lam = float(w[0])
    v = V[:, 0] / np.linalg.norm(V[:, 0])
    res = float(np.linalg.norm(op.matvec(v) - lam * v))
    if res > tol * max(abs(lam), np.finfo(float).tiny) and res > 1e-12:
        raise ConvergenceError(f"Lanczos residual {res:.3e} above {tol:.1e} * |{lam:.6g}|")
    return Eigenpair(lam, v, res, "lanczos", counter["n"])


def lambda_max(M, tol: float = DEFAULT_TOL, max_iter: int | None = None, seed: int = 0) -> Eigenpair:
    """Largest eigenvalue and a unit witness vector of a symmetric matrix or operator.

    Dense arrays up to ``DENSE_LIMIT`` use a full symmetric eigensolve; larger
    arrays and all operators above ``SMALL_OPERATOR`` use implicitly
    restarted Lanczos (ARPACK) from a seeded start vector, and the residual
    ``||A v - lambda v|| <= tol * |lambda|`` is checked on return.
    """
    return _extreme(M, True, tol, max_iter, seed)


def lambda_min(M, tol: float = DEFAULT_TOL, max_iter: int | None = None, seed: int = 0) -> Eigenpair:
    return _extreme(M, False, tol, max_iter, seed)


def spectral_norm(M, tol: float = DEFAULT_TOL, max_iter: int | None = None, seed: int = 0) -> float:
    """``max(|lambda_max|, |lambda_min|)`` for a symmetric matrix or operator."""
    hi = lambda_max(M, tol, max_iter, seed).value
    lo = lambda_min(M, tol, max_iter, seed).value
    return max(abs(hi), abs(lo))


def lambda_min_dense(M) -> float:
    A = np.asarray(M, dtype=float)
    if A.shape[0] > DENSE_LIMIT:
        raise BudgetExceeded(f"dense eigensolve of dimension {A.shape[0]} > {DENSE_LIMIT}")
    return float(scipy.linalg.eigvalsh(A, subset_by_index=[0, 0])[0])


def psd_tolerance(M) -> float:
    return 1e-8 * (1.0 + float(np.linalg.norm(np.asarray(M, dtype=float))))


def psd_check(M, tol: float | None = None) -> PSDResult:
    """Decide ``lambda_min(M) >= -tol`` by a dense symmetric eigensolve.

    The default tolerance scales with the Frobenius norm of ``M``.
    """
    A = np.asarray(M, dtype=float)
    if tol is None:
        tol = psd_tolerance(A)
    lam = lambda_min_dense(A)
    return PSDResult(lam >= -tol, lam, tol, "eigh")


def is_psd(M, tol: float | None = None) -> bool:
    return psd_check(M, tol).ok
