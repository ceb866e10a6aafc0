"""Quotient matrices of SoS-symmetric matrices and the q = d upper bound."""
from __future__ import annotations

import numpy as np

from .errors import NotSoSSymmetric
from .index_core import (SymMatrix, index_table, is_sos_symmetric, pair_sum_ranks,
                         sos_symmetrize)
from .spectral import DEFAULT_TOL, lambda_max
from .tensor_model import DenseTensor, coefficient_vector, flatten


def quotient_matrix(M: SymMatrix, tol: float = 1e-9) -> SymMatrix:
    """Compress an SoS-symmetric ``M`` to ``Q[b, c] = M[I, J] sqrt(|O(b)| |O(c)|)``.

    Each orbit block is averaged rather than sampled at one representative,
    which absorbs float noise from upstream.
    """
    if not is_sos_symmetric(M, tol):
        raise NotSoSSymmetric(f"matrix is not SoS-symmetric within {tol:g}")
    table = index_table(M.n, M.k)
    D = table.num_multiindices
    ids = table.tuple_ids
    labels = (ids[:, None] * D + ids[None, :]).ravel()
    sums = np.bincount(labels, weights=M.entries.ravel(), minlength=D * D).reshape(D, D)
    root = np.sqrt(table.orbit_sizes.astype(float))
    Q = sums / np.outer(root, root)
    return SymMatrix((Q + Q.T) / 2, M.n, M.k, "multiindex", "symmetric")


def norm_dominates(M: SymMatrix, Q: SymMatrix, tol: float = 1e-9) -> tuple[float, float, bool]:
    """Check ``lambda_max(M) <= lambda_max(Q) + tol``; returns both eigenvalues."""
    lm = lambda_max(M.entries).value
    lq = lambda_max(Q.entries).value
    return lm, lq, lm <= lq + tol


def quotient_of_tensor(A: DenseTensor) -> SymMatrix:
    """Quotient of the SoS-symmetric representation of ``<A, x^{(x)d}>``, from coefficients.

    Equal to ``quotient_matrix(sos_symmetrize(flatten(A)))`` but built in
    ``O(n^d + D^2)`` without the ``n^d``-entry pair-class table.
    """
    d, n = A.order, A.dim
    if d % 2:
        raise ValueError(f"need even order, got {d}")
    k = d // 2
    coef = coefficient_vector(A)
    big = index_table(n, d).orbit_sizes.astype(float)
    mean_coef = coef / big
    ranks = pair_sum_ranks(n, k)
    root = np.sqrt(index_table(n, k).orbit_sizes.astype(float))
    Q = mean_coef[ranks] * np.outer(root, root)
    return SymMatrix(Q, n, k, "multiindex", "symmetric")


def sos_representation(A: DenseTensor) -> SymMatrix:
    """The unique SoS-symmetric matrix representation of ``<A, x^{(x)d}>``."""
    return sos_symmetrize(flatten(A))


def cert_upper_qd(A: DenseTensor, q: int | None = None, tol: float = DEFAULT_TOL,
                  seed: int = 0) -> float:
    """Certified upper bound on the degree-``d`` SoS value of ``<A, x^{(x)d}>``.

    Returns ``lambda_max`` of the quotient of the SoS-symmetric
    representation; it bounds both the sphere maximum and the relaxation.
    """
    if q is not None and q != A.order:
        raise ValueError(f"quotient certificate needs q == d, got q={q}, d={A.order}")
    Q = quotient_of_tensor(A)
    return lambda_max(Q.entries, tol=tol, seed=seed).value
