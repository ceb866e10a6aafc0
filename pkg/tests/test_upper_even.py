import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensorcert.errors import BudgetExceeded
from tensorcert.fmax_estimate import heuristic_fmax
from tensorcert.index_core import tensor_power
from tensorcert.spectral import lambda_max
from tensorcert.tensor_model import DenseTensor, evaluate, sample_tensor
from tensorcert.upper_even import (SymmetrizedPowerOp, cert_upper_even, kron_power_apply,
                                   sym_project, symmetric_flattening)


def dense_projector(n, k):
    N = n**k
    P = np.zeros((N, N))
    tuples = list(itertools.product(range(n), repeat=k))
    pos = {t: i for i, t in enumerate(tuples)}
    perms = list(itertools.permutations(range(k)))
    for t in tuples:
        for p in perms:
            P[pos[t], pos[tuple(t[i] for i in p)]] += 1 / len(perms)
    return P


def test_sym_project_examples():
    assert np.allclose(sym_project(np.ones(9), 3, 2), np.ones(9))
    e = np.zeros(4)
    e[1] = 1.0  # tuple (0, 1)
    assert np.allclose(sym_project(e, 2, 2), [0, 0.5, 0.5, 0])
    v = np.random.default_rng(0).standard_normal(27)
    once = sym_project(v, 3, 3)
    assert np.allclose(sym_project(once, 3, 3), once, atol=1e-15)
    assert np.allclose(once, dense_projector(3, 3) @ v)


def test_kron_examples():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((3, 3))
    v = rng.standard_normal(3)
    assert np.allclose(kron_power_apply(A, 1, v), A @ v)
    w = rng.standard_normal(27)
    assert np.array_equal(kron_power_apply(np.eye(3), 3, w), w)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_kron_matches_dense(m, r, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, m))
    v = rng.standard_normal(m**r)
    K = np.ones((1, 1))
    for _ in range(r):
        K = np.kron(K, A)
    assert np.allclose(kron_power_apply(A, r, v), K @ v, atol=1e-12)
    V = rng.standard_normal((m**r, 3))
    assert np.allclose(kron_power_apply(A, r, V), K @ V, atol=1e-12)


def test_operator_matches_dense_construction():
    n = 3
    A = sample_tensor(n, 4, "gaussian", 2)
    As = symmetric_flattening(A)
    op = SymmetrizedPowerOp(As, 2, n, 4)
    P = dense_projector(n, 4)
    dense = P @ np.kron(As, As) @ P
    assert np.allclose(op.matmat(np.eye(n**4)), dense, atol=1e-12)
    w = np.linalg.eigvalsh(dense)
    assert np.linalg.eigvalsh(op.compressed())[-1] == pytest.approx(w[-1], rel=1e-10)


def test_representation_identity():
    n = 4
    A = sample_tensor(n, 4, "rademacher", 3)
    op = SymmetrizedPowerOp(symmetric_flattening(A), 2, n, 4)
    rng = np.random.default_rng(3)
    for _ in range(20):
        x = rng.standard_normal(n)
        y = tensor_power(x, 4)
        f = evaluate(A, x)
        assert abs(y @ op.matvec(y) - f**2) <= 1e-8 * max(1.0, f**2)


def test_compressed_matches_lanczos():
    A = sample_tensor(5, 4, "gaussian", 4)
    res = cert_upper_even(A, 8, seed=1)
    assert res["method"] == "lanczos"
    op = SymmetrizedPowerOp(symmetric_flattening(A), 2, 5, 4)
    assert np.linalg.eigvalsh(op.compressed())[-1] == pytest.approx(res["lambda_max"], rel=1e-7)


def test_zero_tensor():
    assert cert_upper_even(DenseTensor(np.zeros((3,) * 4)), 4)["bound"] == 0.0


def test_q_equals_d_dominates_fmax():
    for seed in range(20):
        A = sample_tensor(5, 4, "rademacher", seed)
        assert heuristic_fmax(A, restarts=10).value <= cert_upper_even(A, 4)["bound"] + 1e-9


def test_d2_is_top_eigenvalue():
    M = np.array([[2.0, 1.0], [0.0, 1.0]])
    want = np.linalg.eigvalsh((M + M.T) / 2)[-1]
    assert cert_upper_even(DenseTensor(M), 2)["bound"] == pytest.approx(want)


def test_validation():
    A = sample_tensor(3, 4, "gaussian", 0)
    with pytest.raises(ValueError):
        cert_upper_even(A, 6)
    with pytest.raises(ValueError):
        cert_upper_even(sample_tensor(3, 3, "gaussian", 0), 6)
    with pytest.raises(BudgetExceeded):
        cert_upper_even(sample_tensor(20, 4, "gaussian", 0), 8)
    with pytest.raises(ValueError):
        SymmetrizedPowerOp(np.eye(3), 2, 3, 3)
