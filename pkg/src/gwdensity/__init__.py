"""Descendant-count limit densities for supercritical branching processes.

Computes the relative limit densities of the number of descendants in a
Galton-Watson process with polynomial offspring distribution and no
extinction, both exactly (power-series recurrence) and approximately
(spectral sums over the exponentially small Fourier coefficients of the
associated Karlin-McGregor function).
"""

__version__ = "0.1.0"

from .approx import (
    ApproxResult,
    RCoefficients,
    approx_asymptotic,
    approx_corrected,
    approx_gamma,
    approx_plain,
    r_coefficients,
    spectral_exponent,
)
from .binom import (
    SPolynomial,
    binom_complex,
    gamma_asymptotic_binom,
    log_gamma,
    s_polynomials,
    stabilized_term,
)
from .dynamics import (
    IterationConfig,
    PsiExpansion,
    eval_kstar,
    eval_phi,
    eval_pi,
    psi_expansion,
)
from .exact import CoefficientTable, cubic_c, exact_coeffs, exact_coeffs_cubic, oracle_coeffs
from .fourier import Spectrum, compute_spectrum, theta
from .pgf import LatticeSupportWarning, OffspringPGF, build_pgf, evaluate
from .powerseries import TruncatedSeries, exp_series, log1p_series, multiply, pow_complex

__all__ = [
    "ApproxResult",
    "CoefficientTable",
    "IterationConfig",
    "LatticeSupportWarning",
    "OffspringPGF",
    "PsiExpansion",
    "RCoefficients",
    "SPolynomial",
    "Spectrum",
    "TruncatedSeries",
    "approx_asymptotic",
    "approx_corrected",
    "approx_gamma",
    "approx_plain",
    "binom_complex",
    "build_pgf",
    "compute_spectrum",
    "cubic_c",
    "evaluate",
    "eval_kstar",
    "eval_phi",
    "eval_pi",
    "exact_coeffs",
    "exact_coeffs_cubic",
    "exp_series",
    "gamma_asymptotic_binom",
    "log1p_series",
    "log_gamma",
    "multiply",
    "oracle_coeffs",
    "pow_complex",
    "psi_expansion",
    "r_coefficients",
    "s_polynomials",
    "spectral_exponent",
    "stabilized_term",
    "theta",
]
