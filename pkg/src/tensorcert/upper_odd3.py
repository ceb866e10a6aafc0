"""Upper bounds for order-3 tensors.

With symmetric slices ``T_l`` of the tensor, ``f(x) = sum_l x_l (x^T T_l x)``
and by Cauchy-Schwarz ``f(x)^2 <= g(x) = sum_l (x^T T_l x)^2``.  ``g`` is
represented by ``calT = sum_l T_l (x) T_l``; its "diagonal" part ``E`` (entries
at ``((i,i),(j,j))``) is split off and bounded through the diagonal matrix
``E'`` that represents the same quartic ``h``.  The remainder ``T = calT - E``
is raised to the ``q/4``-th Kronecker power and symmetrized, and

    bound = sqrt(||B||^{4/q} + max(0, lambda_max(E')))

bounds the degree-``q`` relaxation value of ``f``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded
from .spectral import DEFAULT_TOL, lambda_max, lambda_min
from .tensor_model import DenseTensor, symmetrized_slices
from .upper_even import MAX_OPERATOR_DIM, SymmetrizedPowerOp


@dataclass
class OddPipelineState:
    n: int
    q: int
    slices: list[np.ndarray]
    calT: np.ndarray
    E: np.ndarray
    E_prime: np.ndarray
    T: np.ndarray


def build_odd_state(A: DenseTensor, q: int) -> OddPipelineState:
    if A.order != 3:
        raise ValueError(f"order-3 pipeline got order {A.order}")
    if q <= 0 or q % 4:
        raise ValueError(f"q must be a positive multiple of 4, got {q}")
    n = A.dim
    if n ** (q // 2) > MAX_OPERATOR_DIM:
        raise BudgetExceeded(f"operator dimension {n ** (q // 2)} exceeds {MAX_OPERATOR_DIM}")
    slices = symmetrized_slices(A)
    calT = np.zeros((n * n, n * n))
    for T_l in slices:
        calT += np.kron(T_l, T_l)
    diag_pos = np.arange(n) * (n + 1)  # row-major position of (i, i)
    E = np.zeros_like(calT)
    E[np.ix_(diag_pos, diag_pos)] = calT[np.ix_(diag_pos, diag_pos)]
    block = calT[np.ix_(diag_pos, diag_pos)]
    # E'[(i,j),(i,j)] carries the x_i^2 x_j^2 coefficient of h split evenly
    # over (i,j) and (j,i), so that E and E' represent the same quartic.
    E_prime = np.diag(((block + block.T) / 2).ravel())
    return OddPipelineState(n, q, slices, calT, E, E_prime, calT - E)


def cert_upper_odd3(A: DenseTensor, q: int, tol: float = DEFAULT_TOL,
                    max_iter: int | None = None, seed: int = 0) -> dict:
    """Certified upper bound on the degree-``q`` SoS value of an order-3 tensor polynomial."""
    st = build_odd_state(A, q)
    op = SymmetrizedPowerOp(st.T, q // 4, st.n, q // 2)
    hi = lambda_max(op, tol=tol, max_iter=max_iter, seed=seed)
    lo = lambda_min(op, tol=tol, max_iter=max_iter, seed=seed)
    norm_B = max(abs(hi.value), abs(lo.value))
    lam_E = float(np.max(np.diag(st.E_prime)))
    radicand = norm_B ** (4.0 / q) + max(0.0, lam_E)
    clamped = radicand < 0
    return {
        "op": "upper_odd3",
        "bound": float(np.sqrt(max(0.0, radicand))),
        "norm_B": norm_B,
        "lambda_max_E_prime": lam_E,
        "e_prime_within_5n": bool(lam_E <= 5 * st.n),
        "radicand_clamped": bool(clamped),
        "dim": op.shape[0],
        "residual": max(hi.residual, lo.residual),
        "iterations": hi.iterations + lo.iterations,
        "method": hi.method,
        "tol": tol,
    }
