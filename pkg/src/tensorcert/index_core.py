"""Tuples, multi-indices, orbits and SoS-symmetry over ``[n]^k``.

Conventions
-----------
* Tuples are 0-based: an index tuple ``I`` of length ``k`` has entries in
  ``range(n)``.  Tuple-indexed matrices order rows by row-major (C order)
  position, so tuple ``(i_1, ..., i_k)`` sits at ``np.ravel_multi_index(I,
  (n,)*k)``.
* A multi-index is a plain ``tuple`` of ``n`` non-negative ints.  Multi-indices
  of a fixed degree are enumerated in graded lexicographic order, which within
  one degree is descending lexicographic order on the count vectors:
  ``(2, 0), (1, 1), (0, 2)``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded

# Largest tuple-indexed dimension for which dense pair-class tables are built.
DENSE_LIMIT = 4096

_INT64_MAX = np.iinfo(np.int64).max


def tuple_to_multiindex(I: Sequence[int], n: int) -> tuple[int, ...]:
    """Count occurrences of each coordinate ``0..n-1`` in the tuple ``I``."""
    counts = [0] * n
    for i in I:
        if not 0 <= i < n:
            raise ValueError(f"tuple entry {i} outside range(0, {n})")
        counts[i] += 1
    return tuple(counts)


def orbit_size(alpha: Sequence[int]) -> int:
    """Number of tuples mapping to ``alpha``: ``|alpha|! / prod(alpha_i!)``.

    Computed in exact integer arithmetic; raises ``OverflowError`` when the
    result no longer fits a signed 64-bit integer.
    """
    if any(a < 0 for a in alpha):
        raise ValueError("multi-index entries must be non-negative")
    size = math.factorial(sum(alpha))
    for a in alpha:
        size //= math.factorial(a)
    if size > _INT64_MAX:
        raise OverflowError(f"orbit size of {tuple(alpha)} exceeds int64")
    return size


def num_multiindices(n: int, k: int) -> int:
    return math.comb(n + k - 1, k)


def enumerate_multiindices(n: int, k: int) -> list[tuple[int, ...]]:
    """All multi-indices in ``N^n`` of degree ``k``, in graded-lex order."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if num_multiindices(n, k) > _INT64_MAX:
        raise OverflowError("multi-index count exceeds int64")
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for a in range(remaining, -1, -1):
            rec(prefix + [a], remaining - a, slots - 1)

    rec([], k, n)
    return out


@dataclass(frozen=True)
class IndexTable:
    """Precomputed lookup tables for ``[n]^k`` and ``N^{n,k}``.

    ``tuple_ids[t]`` is the graded-lex rank of ``alpha(I)`` for the tuple at
    row-major position ``t``.
    """

    n: int
    k: int
    multiindices: list[tuple[int, ...]]
    counts: np.ndarray = field(repr=False)
    orbit_sizes: np.ndarray = field(repr=False)
    tuple_ids: np.ndarray = field(repr=False)

    @property
    def num_tuples(self) -> int:
        return self.n**self.k

    @property
    def num_multiindices(self) -> int:
        return len(self.multiindices)

    def rank(self, alpha: Sequence[int]) -> int:
        return _rank_lookup(self.n, self.k)[tuple(alpha)]


def all_tuples(n: int, k: int) -> np.ndarray:
    """``(n**k, k)`` array of all tuples in row-major order."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((n,) * k).reshape(k, -1)
    return grids.T.astype(np.int64)


@functools.lru_cache(maxsize=64)
def index_table(n: int, k: int) -> IndexTable:
    if n**k > 1 << 26:
        raise BudgetExceeded(f"n^k = {n}^{k} tuples exceeds the table budget")
    mis = enumerate_multiindices(n, k)
    counts = np.array(mis, dtype=np.int64).reshape(len(mis), n)
    sizes = np.array([orbit_size(a) for a in mis], dtype=np.int64)
    # Ascending lex order of sorted tuples is descending lex order of counts,
    # so ranking the canonical (sorted) tuple gives the graded-lex rank.
    canon = np.sort(all_tuples(n, k), axis=1)
    keys = canon @ (n ** np.arange(k - 1, -1, -1, dtype=np.int64)) if k else np.zeros(1, np.int64)
    uniq, inv = np.unique(keys, return_inverse=True)
    assert uniq.size == len(mis)
    return IndexTable(n, k, mis, counts, sizes, inv.reshape(-1).astype(np.int64))


@functools.lru_cache(maxsize=64)
def _rank_lookup(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {a: r for r, a in enumerate(enumerate_multiindices(n, k))}


@functools.lru_cache(maxsize=16)
def multiindex_pair_classes(n: int, k: int) -> tuple[np.ndarray, int]:
    """Label each multi-index pair ``(beta, gamma)`` by the class of ``beta + gamma``.

    Returns ``(labels, num_classes)`` with ``labels`` of shape ``(D, D)``.
    """
    table = index_table(n, k)
    c = table.counts.astype(np.int8 if 2 * k < 127 else np.int32)
    sums = (c[:, None, :] + c[None, :, :]).reshape(-1, n)
    _, inv = np.unique(sums, axis=0, return_inverse=True)
    labels = inv.reshape(table.num_multiindices, table.num_multiindices)
    return labels.astype(np.int32), int(inv.max()) + 1


def tuple_pair_classes(n: int, k: int) -> tuple[np.ndarray, int]:
    """Class label of ``alpha(I) + alpha(J)`` for every tuple pair, shape ``(n^k, n^k)``."""
    N = n**k
    if N > DENSE_LIMIT:
        raise BudgetExceeded(f"tuple-indexed dimension {N} > {DENSE_LIMIT}")
    table = index_table(n, k)
    mlabels, ncls = multiindex_pair_classes(n, k)
    ids = table.tuple_ids
    return mlabels[np.ix_(ids, ids)], ncls


@dataclass
class SymMatrix:
    """Square matrix indexed by tuples in ``[n]^k`` or multi-indices in ``N^{n,k}``.

    ``symmetry`` is one of ``"none"``, ``"symmetric"``, ``"sos-symmetric"``.
    """

    entries: np.ndarray
    n: int
    k: int
    kind: str = "tuple"
    symmetry: str = "none"

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=float)
        if self.kind not in ("tuple", "multiindex"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.symmetry not in ("none", "symmetric", "sos-symmetric"):
            raise ValueError(f"unknown symmetry tag {self.symmetry!r}")
        dim = self.n**self.k if self.kind == "tuple" else num_multiindices(self.n, self.k)
        if self.entries.shape != (dim, dim):
            raise ValueError(
                f"{self.kind}-indexed matrix for n={self.n}, k={self.k} "
                f"must be {dim}x{dim}, got {self.entries.shape}"
            )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def _class_reduce(M: SymMatrix):
    labels, ncls = tuple_pair_classes(M.n, M.k)
    flat = labels.ravel()
    vals = M.entries.ravel()
    order = np.argsort(flat, kind="stable")
    sorted_labels = flat[order]
    starts = np.flatnonzero(np.r_[True, sorted_labels[1:] != sorted_labels[:-1]])
    sv = vals[order]
    cmin = np.minimum.reduceat(sv, starts)
    cmax = np.maximum.reduceat(sv, starts)
    csum = np.add.reduceat(sv, starts)
    csize = np.diff(np.r_[starts, flat.size])
    assert starts.size == ncls
    return flat, cmin, cmax, csum, csize


def is_sos_symmetric(M: SymMatrix, tol: float = 0.0) -> bool:
    """True iff entries sharing ``alpha(I) + alpha(J)`` agree within ``tol``."""
    if M.kind != "tuple":
        raise ValueError("SoS-symmetry is defined for tuple-indexed matrices")
    _, cmin, cmax, _, _ = _class_reduce(M)
    return bool(np.all(cmax - cmin <= tol))


def sos_symmetrize(M: SymMatrix) -> SymMatrix:
    """Average ``M`` over each class ``{(I, J) : alpha(I) + alpha(J) = gamma}``.

    The result represents the same polynomial as ``M``.  Classes that are
    already constant keep their value bit-for-bit, so the map is idempotent
    in floating point.
    """
    if M.kind != "tuple":
        raise ValueError("sos_symmetrize needs a tuple-indexed matrix")
    flat, cmin, cmax, csum, csize = _class_reduce(M)
    means = np.where(cmin == cmax, cmin, csum / csize)
    out = means[flat].reshape(M.entries.shape)
    return SymMatrix(out, M.n, M.k, "tuple", "sos-symmetric")


def tensor_power(x: np.ndarray, k: int) -> np.ndarray:
    """``x^{(x)k}`` flattened in row-major tuple order."""
    out = np.ones(1)
    for _ in range(k):
        out = np.kron(out, x)
    return out


@functools.lru_cache(maxsize=64)
def representatives(n: int, k: int) -> np.ndarray:
    """Row-major position of the first tuple in each orbit, in graded-lex order."""
    ids = index_table(n, k).tuple_ids
    reps = np.empty(index_table(n, k).num_multiindices, dtype=np.int64)
    reps[ids[::-1]] = np.arange(ids.size - 1, -1, -1)
    return reps


@functools.lru_cache(maxsize=16)
def pair_sum_ranks(n: int, k: int) -> np.ndarray:
    """Graded-lex rank in ``N^{n,2k}`` of ``beta + gamma`` for all ``beta, gamma`` in ``N^{n,k}``."""
    reps = representatives(n, k)
    big = index_table(n, 2 * k).tuple_ids
    return big[reps[:, None] * n**k + reps[None, :]]
