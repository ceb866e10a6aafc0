"""Random tensors, flattenings, coefficients and polynomial evaluation.

Random stream
-------------
Tensors are drawn from numpy's ``PCG64`` bit generator seeded with
``SeedSequence(seed)``.  The Rademacher model reads ``ceil(n^d / 8)`` bytes
from ``Generator.bytes`` and unpacks them little-endian bit order; bit ``1``
maps to ``+1`` and bit ``0`` to ``-1``, one bit per entry in row-major order.
The Gaussian model uses ``Generator.standard_normal``.  Both are stable
across platforms for a given numpy major version.

File format
-----------
A tensor file is a single JSON object::

    {"format": "tensorcert.tensor", "version": 1,
     "order": d, "dim": n, "model": "rademacher", "seed": 17,
     "payload": null}

``payload`` is either ``null`` (regenerate from ``model`` and ``seed``) or a
base64 string of the little-endian float64 entries in row-major order.
Explicit tensors always carry a payload.
"""
from __future__ import annotations

import base64
import itertools
import json
import math
import secrets
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BudgetExceeded
from .index_core import SymMatrix, index_table

MODELS = ("rademacher", "gaussian", "explicit")

# Maximum number of tensor entries sample_tensor will allocate.
MAX_ENTRIES = 1 << 26

FILE_FORMAT = "tensorcert.tensor"
FILE_VERSION = 1


@dataclass
class DenseTensor:
    entries: np.ndarray
    model: str = "explicit"
    seed: int | None = None

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=float)
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        shape = self.entries.shape
        if len(shape) == 0 or len(set(shape)) != 1:
            raise ValueError(f"tensor must be cubical, got shape {shape}")

    @property
    def order(self) -> int:
        return self.entries.ndim

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def sample_tensor(n: int, d: int, model: str = "rademacher", seed: int | None = None,
                  max_entries: int = MAX_ENTRIES) -> DenseTensor:
    """Draw an order-``d`` tensor on ``R^n`` with i.i.d. entries.

    ``seed=None`` draws a fresh 64-bit seed from OS entropy; the seed used is
    stored on the returned tensor either way.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    size = n**d
    if size > max_entries:
        raise BudgetExceeded(f"{n}^{d} = {size} entries exceeds budget {max_entries}")
    if seed is None:
        seed = secrets.randbits(64)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    if model == "rademacher":
        raw = np.frombuffer(rng.bytes((size + 7) // 8), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[:size]
        entries = bits.astype(float) * 2.0 - 1.0
    elif model == "gaussian":
        entries = rng.standard_normal(size)
    else:
        raise ValueError(f"cannot sample model {model!r}")
    return DenseTensor(entries.reshape((n,) * d), model, int(seed))


def flatten(A: DenseTensor) -> SymMatrix:
    """Matrix ``A[I, J] = tensor[I + J]`` over ``[n]^{d/2} x [n]^{d/2}``."""
    d, n = A.order, A.dim
    if d % 2:
        raise ValueError(f"cannot flatten odd order {d}")
    m = n ** (d // 2)
    return SymMatrix(A.entries.reshape(m, m), n, d // 2, "tuple", "none")


def unflatten(M: SymMatrix) -> DenseTensor:
    return DenseTensor(M.entries.reshape((M.n,) * (2 * M.k)))


def evaluate(A: DenseTensor, x: np.ndarray) -> float:
    """Full contraction ``<A, x^{(x)d}>``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (A.dim,):
        raise ValueError(f"x has shape {x.shape}, expected ({A.dim},)")
    t = A.entries
    for _ in range(A.order):
        t = t @ x
    return float(t)


def symmetrize_tensor(A: DenseTensor) -> DenseTensor:
    """Average over all axis permutations; same polynomial, symmetric entries."""
    perms = list(itertools.permutations(range(A.order)))
    acc = np.zeros_like(A.entries)
    for p in perms:
        acc += np.transpose(A.entries, p)
    return DenseTensor(acc / len(perms), "explicit", A.seed)


def coefficients(A: DenseTensor) -> dict[tuple[int, ...], float]:
    """Monomial coefficients ``f_alpha = sum_{K in O(alpha)} A[K]``."""
    arr = coefficient_vector(A)
    mis = index_table(A.dim, A.order).multiindices
    return dict(zip(mis, arr.tolist()))


def coefficient_vector(A: DenseTensor) -> np.ndarray:
    """Coefficients as an array aligned with the graded-lex multi-index order."""
    table = index_table(A.dim, A.order)
    return np.bincount(table.tuple_ids, weights=A.entries.ravel(),
                       minlength=table.num_multiindices)


def evaluate_coefficients(coef: dict[tuple[int, ...], float], x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    return float(sum(c * math.prod(x**np.array(a)) for a, c in coef.items()))


def symmetrized_slices(A: DenseTensor) -> list[np.ndarray]:
    """Slices ``T_l = (Tbar_l + Tbar_l^T) / 2`` with ``Tbar_l[i, j] = A[l, i, j]``.

    ``sum_l x_l (x^T T_l x)`` equals ``<A, x^{(x)3}>``.
    """
    if A.order != 3:
        raise ValueError(f"slices need an order-3 tensor, got order {A.order}")
    E = A.entries
    return [(E[l] + E[l].T) / 2 for l in range(A.dim)]


def save_tensor(A: DenseTensor, path: str | Path, include_payload: bool | None = None) -> None:
    """Write ``A`` in the JSON tensor format.

    By default seeded random tensors are stored by seed only.
    """
    if include_payload is None:
        include_payload = A.model == "explicit" or A.seed is None
    if A.model == "explicit":
        include_payload = True
    payload = None
    if include_payload:
        payload = base64.b64encode(A.entries.astype("<f8").tobytes(order="C")).decode("ascii")
    doc = {
        "format": FILE_FORMAT,
        "version": FILE_VERSION,
        "order": A.order,
        "dim": A.dim,
        "model": A.model,
        "seed": A.seed,
        "payload": payload,
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n")


def load_tensor(path: str | Path) -> DenseTensor:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != FILE_FORMAT:
        raise ValueError(f"{path}: not a tensor file")
    d, n, model, seed = doc["order"], doc["dim"], doc["model"], doc.get("seed")
    if doc.get("payload") is not None:
        raw = base64.b64decode(doc["payload"])
        entries = np.frombuffer(raw, dtype="<f8").astype(float)
        if entries.size != n**d:
            raise ValueError(f"{path}: payload has {entries.size} entries, expected {n**d}")
        return DenseTensor(entries.reshape((n,) * d), model, seed)
    if model == "explicit" or seed is None:
        raise ValueError(f"{path}: no payload and nothing to regenerate from")
    return sample_tensor(n, d, model, seed)
