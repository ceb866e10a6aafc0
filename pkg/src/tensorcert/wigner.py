"""Catalan/Hankel combinatorics and the Wigner moment matrix.

The univariate moment matrix of the semicircle law on ``[-2, 2]`` is the
Hankel matrix ``H[i, j] = C_{(i+j)/2}`` (zero for odd ``i + j``), and its
unit-diagonal Cholesky factor ``R`` counts consistent parenthesis strings.
Products of these moments over independent coordinates give ``W_hat``, an
SoS-symmetric matrix over ``N^{n,q/2}`` whose smallest eigenvalue is at
least 1/2.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import BudgetExceeded
from .index_core import (DENSE_LIMIT, SymMatrix, index_table, num_multiindices)


def catalan(l: int) -> int:
    """The ``l``-th Catalan number ``binom(2l, l) / (l + 1)``, exactly."""
    if l < 0:
        raise ValueError("Catalan index must be non-negative")
    return math.comb(2 * l, l) // (l + 1)


def paren_matrix(k: int) -> np.ndarray:
    """``R = [e0, T e0, ..., T^k e0]`` with ``T`` the 0/1 path adjacency matrix.

    ``R[i, j]`` counts strings of ``j`` parentheses in which every prefix has
    at least as many '(' as ')' and which end ``i`` opens ahead.
    Returned as an exact ``object`` array of Python ints.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    R = np.zeros((k + 1, k + 1), dtype=object)
    col = [0] * (k + 1)
    col[0] = 1
    for j in range(k + 1):
        R[:, j] = col
        col = [(col[i - 1] if i > 0 else 0) + (col[i + 1] if i < k else 0)
               for i in range(k + 1)]
    return R


def hankel_matrix(k: int) -> np.ndarray:
    """``H = R^T R``; entries are Catalan numbers on even ``i + j``, else 0."""
    R = paren_matrix(k)
    return R.T.dot(R)


def hankel_from_catalan(k: int) -> np.ndarray:
    H = np.zeros((k + 1, k + 1), dtype=object)
    for i in range(k + 1):
        for j in range(k + 1):
            H[i, j] = catalan((i + j) // 2) if (i + j) % 2 == 0 else 0
    return H


def _moment_table(q: int) -> np.ndarray:
    # m[e] = E[w^e] for the semicircle law with radius 2.
    return np.array([catalan(e // 2) if e % 2 == 0 else 0 for e in range(q + 1)],
                    dtype=object)


def wigner_hat(n: int, q: int, budget: int = DENSE_LIMIT) -> np.ndarray:
    """``W_hat[a, b] = prod_i C_{(a_i + b_i)/2}``, or 0 if some ``a_i + b_i`` is odd.

    Indexed by ``N^{n,q/2}`` in graded-lex order; returned as an exact
    integer (``object``) array.
    """
    if q <= 0 or q % 2:
        raise ValueError(f"q must be a positive even integer, got {q}")
    k = q // 2
    D = num_multiindices(n, k)
    if D > budget:
        raise BudgetExceeded(f"W_hat dimension {D} exceeds {budget}")
    counts = index_table(n, k).counts
    sums = counts[:, None, :] + counts[None, :, :]
    moments = _moment_table(q)
    W = np.ones((D, D), dtype=object)
    for i in range(n):
        W = W * moments[sums[:, :, i]]
    return W


def wigner_extend(W_hat: np.ndarray, n: int, q: int) -> SymMatrix:
    """Tuple-indexed extension ``W[I, J] = W_hat[alpha(I), alpha(J)]``."""
    k = q // 2
    if n**k > DENSE_LIMIT:
        raise BudgetExceeded(f"tuple dimension {n**k} exceeds {DENSE_LIMIT}")
    ids = index_table(n, k).tuple_ids
    W = np.asarray(W_hat, dtype=float)[np.ix_(ids, ids)]
    return SymMatrix(W, n, k, "tuple", "sos-symmetric")


def wigner_trace(W_hat: np.ndarray, n: int, q: int) -> int:
    """Exact ``trace(W) = sum_alpha |O(alpha)| * W_hat[alpha, alpha]``."""
    sizes = index_table(n, q // 2).orbit_sizes
    return int(sum(int(s) * int(w) for s, w in zip(sizes, np.diag(W_hat))))
