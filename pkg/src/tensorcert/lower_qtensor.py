"""Explicit moment matrices certifying lower bounds on the q = d relaxation.

The moment matrix is

    M = (1/c1) * ( (1/c2) * (q/n)^{3q/4} * Amul + W / n^{q/2} )

with ``Amul`` the multilinear part of the SoS-symmetric representation of
``f`` and ``W`` the tuple-indexed Wigner moment matrix.  ``c1`` fixes
``trace(M) = 1`` and ``c2`` is the smallest power of two that makes ``M``
PSD.  Such an ``M`` is feasible for the primal (trace one, SoS-symmetric,
PSD), so ``<A, M>`` is a lower bound on the relaxation value for any matrix
representation ``A`` of ``f``.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded
from .index_core import (DENSE_LIMIT, SymMatrix, index_table, is_sos_symmetric,
                         pair_sum_ranks, sos_symmetrize)
from .spectral import psd_check, psd_tolerance
from .tensor_model import DenseTensor, coefficient_vector, flatten
from .wigner import wigner_extend, wigner_hat, wigner_trace

MAX_C2_EXPONENT = 64


def build_multilinear_A(A: DenseTensor, q: int | None = None) -> SymMatrix:
    """``Amul[I, J] = f_{alpha(I)+alpha(J)} / q!`` where ``I + J`` has distinct entries, else 0."""
    d, n = A.order, A.dim
    q = d if q is None else q
    if q != d or d % 2:
        raise ValueError(f"need q == d even, got q={q}, d={d}")
    if q > n:
        raise ValueError(f"q={q} > n={n}: no multilinear monomials of degree q")
    k = q // 2
    if n**k > DENSE_LIMIT:
        raise BudgetExceeded(f"dimension {n**k} exceeds {DENSE_LIMIT}")
    coef = coefficient_vector(A)
    multilinear = index_table(n, q).counts.max(axis=1) <= 1
    vals = np.where(multilinear, coef / math.factorial(q), 0.0)
    ids = index_table(n, k).tuple_ids
    ranks = pair_sum_ranks(n, k)[np.ix_(ids, ids)]
    return SymMatrix(vals[ranks], n, k, "tuple", "sos-symmetric")


@dataclass
class MomentCertificate:
    n: int
    q: int
    M: SymMatrix = field(repr=False)
    c1: float
    c2: float
    trace: float
    min_eig: float
    inner_value: float
    psd_tol: float
    seed: int | None = None

    def matrix_hash(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.M.entries, dtype="<f8").tobytes()).hexdigest()

    def to_json(self, include_matrix: bool = False) -> dict:
        doc = {
            "n": self.n,
            "q": self.q,
            "c1": self.c1,
            "c2": self.c2,
            "trace": self.trace,
            "min_eig": self.min_eig,
            "psd_tol": self.psd_tol,
            "inner_value": self.inner_value,
            "seed": self.seed,
            "matrix_hash": self.matrix_hash(),
        }
        if include_matrix:
            doc["matrix"] = self.M.entries.tolist()
        return doc


def inner_product(rep: np.ndarray, M: SymMatrix) -> float:
    return float(np.sum(np.asarray(rep, dtype=float) * M.entries))


def calibrate_and_build(A: DenseTensor, q: int | None = None) -> MomentCertificate:
    """Build the moment matrix and search ``c2 = 1, 2, 4, ...`` until it is PSD.

    Raises ``ValueError`` if no ``c2 <= 2**64`` works at tolerance.
    """
    n = A.dim
    q = A.order if q is None else q
    Amul = build_multilinear_A(A, q)
    W_hat = wigner_hat(n, q)
    W = wigner_extend(W_hat, n, q).entries
    N = n ** (q // 2)
    c1 = wigner_trace(W_hat, n, q) / N
    scale = (q / n) ** (3 * q / 4)
    rep = sos_symmetrize(flatten(A)).entries
    for e in range(MAX_C2_EXPONENT + 1):
        c2 = float(2**e)
        M = (scale / c2 * Amul.entries + W / N) / c1
        check = psd_check(M)
        if check.ok:
            Msym = SymMatrix(M, n, q // 2, "tuple", "sos-symmetric")
            return MomentCertificate(
                n=n, q=q, M=Msym, c1=c1, c2=c2,
                trace=float(np.trace(M)), min_eig=check.min_eig,
                inner_value=inner_product(rep, Msym), psd_tol=check.tol, seed=A.seed,
            )
    raise ValueError(f"moment matrix not PSD for any c2 <= 2^{MAX_C2_EXPONENT}")


@dataclass
class Verification:
    ok: bool
    reasons: list[str]

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(cert: MomentCertificate, A: DenseTensor) -> Verification:
    """Recheck trace, PSD, SoS-symmetry and the inner value from scratch.

    The inner value is recomputed against two representations of the
    polynomial (the SoS-symmetric one and the raw flattening); they agree
    exactly when ``M`` is SoS-symmetric.
    """
    reasons = []
    M = cert.M
    tr = float(np.trace(M.entries))
    if abs(tr - 1.0) > 1e-9:
        reasons.append(f"trace {tr!r} != 1")
    if not np.array_equal(M.entries, M.entries.T):
        reasons.append("M is not symmetric")
    elif not is_sos_symmetric(M, tol=1e-12):
        reasons.append("M is not SoS-symmetric")
    check = psd_check(M.entries, psd_tolerance(M.entries))
    if not check.ok:
        reasons.append(f"min eigenvalue {check.min_eig:.3e} below -{check.tol:.1e}")
    sym_val = inner_product(sos_symmetrize(flatten(A)).entries, M)
    raw_val = inner_product(flatten(A).entries, M)
    scale = max(1.0, abs(sym_val))
    if abs(sym_val - raw_val) > 1e-8 * scale:
        reasons.append(f"inner value depends on representation: {sym_val} vs {raw_val}")
    if abs(sym_val - cert.inner_value) > 1e-8 * scale:
        reasons.append(f"stored inner value {cert.inner_value} != recomputed {sym_val}")
    return Verification(not reasons, reasons)
