"""Heuristic sphere maximum of a tensor polynomial (not certified)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_model import DenseTensor, symmetrize_tensor

MAX_HALVINGS = 40


@dataclass
class MaxEstimate:
    value: float
    argmax: np.ndarray
    restarts: int
    iterations: int
    converged: bool


def _contract(S: np.ndarray, x: np.ndarray, times: int) -> np.ndarray:
    t = S
    for _ in range(times):
        t = t @ x
    return t


def _ascend(S: np.ndarray, x: np.ndarray, max_iter: int, tol: float):
    d = S.ndim
    fx = float(_contract(S, x, d))
    for it in range(1, max_iter + 1):
        grad = _contract(S, x, d - 1)
        gnorm = np.linalg.norm(grad)
        if gnorm == 0.0:
            return x, fx, it, True
        y = grad / gnorm
        fy = float(_contract(S, y, d))
        t = 1.0
        halvings = 0
        while fy < fx and halvings < MAX_HALVINGS:
            t /= 2
            halvings += 1
            z = x + t * (y - x)
            y = z / np.linalg.norm(z)
            fy = float(_contract(S, y, d))
        if fy < fx:
            return x, fx, it, True
        step = np.linalg.norm(y - x)
        x, fx = y, fy
        if step < tol:
            return x, fx, it, True
    return x, fx, max_iter, False


def heuristic_fmax(A: DenseTensor, restarts: int = 50, max_iter: int = 500,
                   tol: float = 1e-10, seed: int = 0) -> MaxEstimate:
    """Best value of multi-start symmetric tensor power iteration on the sphere.

    Each restart ``i`` starts from a Gaussian direction drawn from the ``i``-th
    child of ``SeedSequence(seed)``, so the first ``r`` restarts do not depend
    on the total count.  Every accepted step is non-decreasing in the
    objective; a step that would decrease it is halved back towards the
    current point.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    S = symmetrize_tensor(A).entries
    n = A.dim
    best = None
    total_iter = 0
    all_converged = True
    for child in np.random.SeedSequence(seed).spawn(restarts):
        x0 = np.random.default_rng(child).standard_normal(n)
        x0 /= np.linalg.norm(x0)
        x, fx, it, conv = _ascend(S, x0, max_iter, tol)
        total_iter += it
        all_converged &= conv
        if best is None or fx > best[1]:
            best = (x, fx)
    x, fx = best
    return MaxEstimate(float(_contract(S, x, A.order)), x, restarts, total_iter, all_converged)
