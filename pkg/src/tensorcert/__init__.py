"""Spectral and moment-matrix certificates for random tensor polynomials on the sphere."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, ConvergenceError, NotSoSSymmetric
from .fmax_estimate import MaxEstimate, heuristic_fmax
from .index_core import SymMatrix, index_table, is_sos_symmetric, sos_symmetrize
from .lower_qtensor import MomentCertificate, calibrate_and_build, verify_certificate
from .quotient import cert_upper_qd, quotient_matrix
from .tensor_model import DenseTensor, evaluate, flatten, load_tensor, sample_tensor, save_tensor
from .upper_even import cert_upper_even
from .upper_odd3 import cert_upper_odd3
from .wigner import wigner_hat

__all__ = [
    "BudgetExceeded", "ConvergenceError", "NotSoSSymmetric",
    "MaxEstimate", "heuristic_fmax",
    "SymMatrix", "index_table", "is_sos_symmetric", "sos_symmetrize",
    "MomentCertificate", "calibrate_and_build", "verify_certificate",
    "cert_upper_qd", "quotient_matrix",
    "DenseTensor", "evaluate", "flatten", "load_tensor", "sample_tensor", "save_tensor",
    "cert_upper_even", "cert_upper_odd3", "wigner_hat",
]
