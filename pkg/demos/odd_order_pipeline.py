"""The order-3 pipeline, step by step.

An order-3 polynomial is bounded through the quartic g = sum_l (x^T T_l x)^2,
which dominates f^2 on the sphere.  We show the intermediate matrices for a
small instance and check the identities that make the bound valid.
"""
import numpy as np

from tensorcert.fmax_estimate import heuristic_fmax
from tensorcert.index_core import tensor_power
from tensorcert.tensor_model import sample_tensor
from tensorcert.upper_odd3 import build_odd_state, cert_upper_odd3

A = sample_tensor(4, 3, "rademacher", 1)
st = build_odd_state(A, 4)
print("slices:", len(st.slices), "each", st.slices[0].shape)
print("calT is", st.calT.shape, "with", np.count_nonzero(st.E), "entries moved into E")

x = np.random.default_rng(0).standard_normal(4)
y = tensor_power(x, 2)
g = sum((x @ T @ x) ** 2 for T in st.slices)
print("g(x) directly:      ", g)
print("g(x) through calT:  ", y @ st.calT @ y)
print("E and E' quadratic forms:", y @ st.E @ y, y @ st.E_prime @ y)

res = cert_upper_odd3(A, 4)
print("\n||B||^(4/q) + lambda_max(E') =", res["norm_B"], "+", res["lambda_max_E_prime"])
print("certified bound:", res["bound"])
print("heuristic fmax: ", heuristic_fmax(A, restarts=20).value)
