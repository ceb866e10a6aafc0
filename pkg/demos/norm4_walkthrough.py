"""A walk through the certificates on the smallest interesting polynomial.

f(x) = ||x||^4 in two variables has sphere maximum 1.  We build its
SoS-symmetric matrix representation, compress it to the quotient matrix,
and compare the resulting bounds with the truth.
"""
import numpy as np

from tensorcert.index_core import enumerate_multiindices
from tensorcert.quotient import cert_upper_qd, quotient_matrix, sos_representation
from tensorcert.tensor_model import DenseTensor, evaluate
from tensorcert.upper_even import cert_upper_even

np.set_printoptions(precision=4, suppress=True)

# <A, x^{(x)4}> = sum_{i,j} x_i^2 x_j^2 = ||x||^4
T = np.zeros((2, 2, 2, 2))
for i in range(2):
    for j in range(2):
        T[i, i, j, j] = 1.0
A = DenseTensor(T)

x = np.array([0.6, 0.8])
print("f(x) on a unit vector:", evaluate(A, x))

M = sos_representation(A)
print("\nSoS-symmetric representation over tuples (0,0),(0,1),(1,0),(1,1):")
print(M.entries)

Q = quotient_matrix(M)
print("\nquotient matrix over", enumerate_multiindices(2, 2))
print(Q.entries)

print("\nlambda_max of M:", np.linalg.eigvalsh(M.entries)[-1])
print("quotient bound: ", cert_upper_qd(A))
# The plain flattening puts all weight on ((i,i),(j,j)) and is far looser.
print("raw flattening bound (q=4):", cert_upper_even(A, 4)["bound"])

# Squaring the polynomial and looking at the degree-8 level tightens the bound.
print("level q=8 bound:", cert_upper_even(A, 8)["bound"])
