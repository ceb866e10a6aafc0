"""Upper bounds for even-order tensors via a symmetrized Kronecker power.

For ``f(x) = <A, x^{(x)d}>`` and ``r = q / d`` the operator

    M = P_sym (A_s)^{(x)r} P_sym,        A_s = (A + A^T) / 2,

acts on ``R^{[n]^{q/2}}``; ``A`` is the ``n^{d/2}``-square flattening and
``P_sym`` averages a tuple-indexed vector over position permutations of each
tuple.  ``M`` represents ``f^r``, so ``lambda_max(M)^{1/r}`` bounds the
degree-``q`` relaxation of ``f``.  ``M`` is never materialized.
"""
from __future__ import annotations

import functools

import numpy as np
import scipy.sparse
from scipy.sparse.linalg import LinearOperator

from .errors import BudgetExceeded
from .index_core import index_table
from .spectral import DEFAULT_TOL, lambda_max
from .tensor_model import DenseTensor, flatten

# Largest tuple-indexed operator dimension accepted by the certifiers.
MAX_OPERATOR_DIM = 1 << 16


@functools.lru_cache(maxsize=32)
def _orbit_average(n: int, k: int) -> scipy.sparse.csr_matrix:
    # Row alpha holds 1/|O(alpha)| on every tuple of the orbit.
    table = index_table(n, k)
    ids = table.tuple_ids
    w = 1.0 / table.orbit_sizes[ids]
    return scipy.sparse.csr_matrix((w, (ids, np.arange(ids.size))),
                                   shape=(table.num_multiindices, ids.size))


def sym_project(v: np.ndarray, n: int, k: int) -> np.ndarray:
    """Replace each entry by the mean of ``v`` over the orbit of its tuple.

    Accepts a vector of length ``n^k`` or an ``(n^k, c)`` block of columns.
    """
    v = np.asarray(v, dtype=float)
    ids = index_table(n, k).tuple_ids
    if v.shape[0] != ids.size:
        raise ValueError(f"expected leading dimension {ids.size}, got {v.shape[0]}")
    return (_orbit_average(n, k) @ v)[ids]


def kron_power_apply(A: np.ndarray, r: int, v: np.ndarray) -> np.ndarray:
    """``(A (x) ... (x) A) v`` with ``r`` factors, by successive mode products.

    ``v`` may be a vector of length ``m^r`` or an ``(m^r, c)`` block.
    """
    A = np.asarray(A, dtype=float)
    m = A.shape[0]
    v = np.asarray(v, dtype=float)
    cols = v.shape[1:]
    if v.shape[0] != m**r:
        raise ValueError(f"vector length {v.shape[0]} != {m}^{r}")
    t = v.reshape((m,) * r + cols)
    for axis in range(r):
        t = np.moveaxis(np.tensordot(A, t, axes=([1], [axis])), 0, axis)
    return t.reshape(v.shape)


class SymmetrizedPowerOp(LinearOperator):
    """``v -> P_sym (A^{(x)r} (P_sym v))`` on tuples in ``[n]^k``."""

    def __init__(self, base: np.ndarray, r: int, n: int, k: int):
        base = np.asarray(base, dtype=float)
        if base.shape[0] ** r != n**k:
            raise ValueError(f"base dimension {base.shape[0]}^{r} != {n}^{k}")
        self.base = base
        self.r = r
        self.n = n
        self.k = k
        dim = n**k
        if dim > MAX_OPERATOR_DIM:
            raise BudgetExceeded(f"operator dimension {dim} exceeds {MAX_OPERATOR_DIM}")
        super().__init__(dtype=np.float64, shape=(dim, dim))

    def _matvec(self, v):
        return self._matmat(np.asarray(v).reshape(-1, 1)).ravel()

    def _matmat(self, V):
        w = sym_project(V, self.n, self.k)
        w = kron_power_apply(self.base, self.r, w)
        return sym_project(w, self.n, self.k)

    def _adjoint(self):
        return self

    def compressed(self) -> np.ndarray:
        """The operator in the orthonormal orbit-indicator basis, ``D x D``.

        Its spectrum is the operator's spectrum off the kernel of ``P_sym``.
        """
        table = index_table(self.n, self.k)
        D, N = table.num_multiindices, table.num_tuples
        ids = table.tuple_ids
        U = np.zeros((N, D))
        U[np.arange(N), ids] = 1.0 / np.sqrt(table.orbit_sizes[ids])
        return U.T @ kron_power_apply(self.base, self.r, U)


def symmetric_flattening(A: DenseTensor) -> np.ndarray:
    F = flatten(A).entries
    return (F + F.T) / 2


def _signed_root(lam: float, r: int) -> float:
    return float(np.sign(lam) * abs(lam) ** (1.0 / r))


def cert_upper_even(A: DenseTensor, q: int, tol: float = DEFAULT_TOL,
                    max_iter: int | None = None, seed: int = 0) -> dict:
    """Certified upper bound ``lambda_max(M)^{d/q}`` on the degree-``q`` SoS value.

    Returns a report entry with the bound, the raw eigenvalue and the
    Lanczos diagnostics.
    """
    d, n = A.order, A.dim
    if d % 2:
        raise ValueError(f"even-order certificate needs even d, got {d}")
    if q % 2 or q % d:
        raise ValueError(f"need q even and divisible by d={d}, got q={q}")
    r = q // d
    if n ** (q // 2) > MAX_OPERATOR_DIM:
        raise BudgetExceeded(f"operator dimension {n ** (q // 2)} exceeds {MAX_OPERATOR_DIM}")
    op = SymmetrizedPowerOp(symmetric_flattening(A), r, n, q // 2)
    eig = lambda_max(op, tol=tol, max_iter=max_iter, seed=seed)
    return {
        "op": "upper_even",
        "bound": _signed_root(eig.value, r),
        "lambda_max": eig.value,
        "power": r,
        "dim": op.shape[0],
        "residual": eig.residual,
        "iterations": eig.iterations,
        "method": eig.method,
        "tol": tol,
        "symmetrization": "position-permutation, 1/((q/2)!)^2 averaging",
    }
