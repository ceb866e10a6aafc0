import hashlib
import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorcert.errors import BudgetExceeded
from tensorcert.index_core import tensor_power
from tensorcert.tensor_model import (DenseTensor, coefficients, evaluate, evaluate_coefficients,
                                     flatten, load_tensor, sample_tensor, save_tensor,
                                     symmetrize_tensor, symmetrized_slices, unflatten)


def naive_evaluate(T, x):
    total = 0.0
    for K in itertools.product(range(T.shape[0]), repeat=T.ndim):
        term = T[K]
        for i in K:
            term *= x[i]
        total += term
    return total


def test_sampling_is_deterministic():
    a = sample_tensor(4, 3, "rademacher", 11)
    b = sample_tensor(4, 3, "rademacher", 11)
    assert np.array_equal(a.entries, b.entries)
    g1, g2 = sample_tensor(3, 4, "gaussian", 5), sample_tensor(3, 4, "gaussian", 5)
    assert np.array_equal(g1.entries, g2.entries)


def test_rademacher_range_and_mean():
    assert set(sample_tensor(2, 2, "rademacher", 0).entries.ravel()) <= {-1.0, 1.0}
    for seed in range(20):
        assert abs(sample_tensor(10, 3, "rademacher", seed).entries.mean()) < 0.1


def test_fresh_seed_recorded():
    A = sample_tensor(3, 2, "gaussian", None)
    assert isinstance(A.seed, int)
    assert np.array_equal(sample_tensor(3, 2, "gaussian", A.seed).entries, A.entries)


def test_sampling_errors():
    with pytest.raises(ValueError):
        sample_tensor(3, 2, "uniform", 0)
    with pytest.raises(BudgetExceeded):
        sample_tensor(100, 5, "rademacher", 0)


def test_flatten_examples():
    M = np.arange(9.0).reshape(3, 3)
    assert np.array_equal(flatten(DenseTensor(M)).entries, M)
    A = sample_tensor(2, 4, "gaussian", 1)
    F = flatten(A).entries
    # tuples (0,1) and (1,0) sit at positions 1 and 2
    assert F[1, 2] == A.entries[0, 1, 1, 0]
    assert not flatten(DenseTensor(np.zeros((2,) * 4))).entries.any()
    with pytest.raises(ValueError):
        flatten(sample_tensor(2, 3, "gaussian", 0))


def test_flatten_roundtrip():
    A = sample_tensor(3, 4, "gaussian", 2)
    assert np.array_equal(unflatten(flatten(A)).entries, A.entries)


def test_evaluate_examples():
    T = np.zeros((3,) * 4)
    T[0, 0, 0, 0] = 1.0
    assert evaluate(DenseTensor(T), np.eye(3)[0]) == 1.0
    x = np.random.default_rng(0).standard_normal(4)
    x /= np.linalg.norm(x)
    assert evaluate(DenseTensor(np.eye(4)), x) == pytest.approx(1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_evaluate_matches_naive_loop(n, d, seed):
    A = sample_tensor(n, d, "gaussian", seed)
    x = np.random.default_rng(seed).standard_normal(n)
    want = naive_evaluate(A.entries, x)
    assert abs(evaluate(A, x) - want) <= 1e-10 * max(1.0, abs(want))


def test_evaluate_via_flattening():
    A = sample_tensor(3, 4, "rademacher", 3)
    x = np.random.default_rng(3).standard_normal(3)
    y = tensor_power(x, 2)
    assert y @ flatten(A).entries @ y == pytest.approx(evaluate(A, x))


def test_coefficient_examples():
    c = coefficients(DenseTensor(np.array([[0.0, 1.0], [1.0, 0.0]])))
    assert c[(1, 1)] == 2 and c[(2, 0)] == 0 and c[(0, 2)] == 0
    assert not any(coefficients(DenseTensor(np.zeros((3,) * 3))).values())


def test_coefficients_evaluate_same_polynomial():
    A = sample_tensor(3, 4, "gaussian", 4)
    c = coefficients(A)
    rng = np.random.default_rng(4)
    for _ in range(50):
        x = rng.standard_normal(3)
        want = evaluate(A, x)
        assert abs(evaluate_coefficients(c, x) - want) <= 1e-10 * max(1.0, abs(want))


def test_symmetrize_tensor_same_polynomial():
    A = sample_tensor(3, 3, "gaussian", 6)
    S = symmetrize_tensor(A)
    assert np.allclose(S.entries, np.transpose(S.entries, (1, 0, 2)))
    x = np.random.default_rng(6).standard_normal(3)
    assert evaluate(S, x) == pytest.approx(evaluate(A, x))


def test_slices():
    T = symmetrized_slices(DenseTensor(np.full((1, 1, 1), 2.5)))
    assert len(T) == 1 and T[0][0, 0] == 2.5
    A = sample_tensor(4, 3, "gaussian", 8)
    slices = symmetrized_slices(A)
    rng = np.random.default_rng(8)
    # symmetrizing only the last two modes keeps the polynomial
    A_sym = DenseTensor((A.entries + np.transpose(A.entries, (0, 2, 1))) / 2)
    for T in slices:
        assert np.array_equal(T, T.T)
    for _ in range(50):
        x = rng.standard_normal(4)
        got = sum(x[l] * (x @ T @ x) for l, T in enumerate(slices))
        want = evaluate(A_sym, x)
        assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_file_roundtrip(tmp_path):
    A = sample_tensor(3, 4, "rademacher", 9)
    p = tmp_path / "a.json"
    save_tensor(A, p)
    doc = json.loads(p.read_text())
    assert doc["payload"] is None and doc["seed"] == 9
    assert np.array_equal(load_tensor(p).entries, A.entries)
    save_tensor(A, p, include_payload=True)
    assert json.loads(p.read_text())["payload"] is not None
    assert np.array_equal(load_tensor(p).entries, A.entries)


def test_explicit_tensor_keeps_payload(tmp_path):
    A = DenseTensor(np.arange(8.0).reshape(2, 2, 2))
    p = tmp_path / "e.json"
    save_tensor(A, p, include_payload=False)
    assert np.array_equal(load_tensor(p).entries, A.entries)


def test_file_hash_is_stable(tmp_path):
    digests = []
    for name in ("a.json", "b.json"):
        p = tmp_path / name
        save_tensor(sample_tensor(4, 4, "gaussian", 12), p, include_payload=True)
        digests.append(hashlib.sha256(p.read_bytes()).hexdigest())
    assert digests[0] == digests[1]


def test_bad_files(tmp_path):
    p = tmp_path / "x.json"
    p.write_text(json.dumps({"format": "other"}))
    with pytest.raises(ValueError):
        load_tensor(p)


def test_dense_tensor_validation():
    with pytest.raises(ValueError):
        DenseTensor(np.zeros((2, 3)))
