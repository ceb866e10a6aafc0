import numpy as np
import pytest

from tensorcert.fmax_estimate import heuristic_fmax
from tensorcert.index_core import tensor_power
from tensorcert.tensor_model import DenseTensor, sample_tensor
from tensorcert.upper_odd3 import build_odd_state, cert_upper_odd3


@pytest.mark.parametrize("a", [-1.5, 0.7, 2.0])
def test_single_index(a):
    A = DenseTensor(np.full((1, 1, 1), a))
    st = build_odd_state(A, 4)
    assert st.calT.tolist() == [[a * a]]
    assert st.E.tolist() == [[a * a]]
    assert st.T.tolist() == [[0.0]]
    # E' represents the same quartic as E, so it carries a^2 (see the ledger)
    assert st.E_prime.tolist() == [[a * a]]
    res = cert_upper_odd3(A, 4)
    assert res["bound"] == pytest.approx(abs(a))
    assert res["bound"] >= abs(a) - 1e-12  # fmax of a x^3 on the unit circle


def test_g_and_h_identities():
    A = sample_tensor(5, 3, "gaussian", 1)
    st = build_odd_state(A, 4)
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = rng.standard_normal(5)
        y = tensor_power(x, 2)
        g = sum((x @ T @ x) ** 2 for T in st.slices)
        assert abs(y @ st.calT @ y - g) <= 1e-10 * max(1.0, g)
        h = y @ st.E @ y
        assert abs(y @ st.E_prime @ y - h) <= 1e-10 * max(1.0, abs(h))


def test_e_prime_is_diagonal_with_pairs():
    st = build_odd_state(sample_tensor(4, 3, "rademacher", 2), 4)
    assert np.count_nonzero(st.E_prime - np.diag(np.diag(st.E_prime))) == 0
    assert np.allclose(st.E + st.T, st.calT)


def test_zero_tensor():
    assert cert_upper_odd3(DenseTensor(np.zeros((3, 3, 3))), 4)["bound"] == 0.0


def test_bound_dominates_fmax():
    for seed in range(10):
        A = sample_tensor(6, 3, "rademacher", seed)
        res = cert_upper_odd3(A, 4)
        assert heuristic_fmax(A, restarts=10).value <= res["bound"] + 1e-9
        assert res["e_prime_within_5n"]


def test_q8_runs():
    A = sample_tensor(4, 3, "rademacher", 0)
    r4, r8 = cert_upper_odd3(A, 4), cert_upper_odd3(A, 8)
    assert r8["bound"] > 0 and r4["bound"] > 0


def test_validation():
    with pytest.raises(ValueError):
        build_odd_state(sample_tensor(3, 3, "gaussian", 0), 6)
    with pytest.raises(ValueError):
        build_odd_state(sample_tensor(3, 4, "gaussian", 0), 4)
