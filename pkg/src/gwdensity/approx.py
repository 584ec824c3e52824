"""Spectral approximation families for the limit densities phi_n.

All four families share one skeleton: a truncated sum over Fourier
modes m = -M..M in which the mode-m weight theta_m multiplies a
binomial-type factor carrying the n-dependence. Conjugate symmetry
(theta_{-m} = conj(theta_m), exponents conjugate likewise) collapses
each sum to the m = 0 term plus twice the real part of the positive-m
terms, so every returned value is real by construction.

* plain      — C(k_m, n) weights alone, with k_m = (2*pi*i*m + ln p1)/ln E;
* corrected  — adds the first inverse-map correction
               rho_{1,m} * C(1 + k_m, n);
* gamma_*    — replaces the binomials by their Gamma-function large-n
               asymptotics, exposing the bare structure
               n^power * Periodic(log_E n);
* asymptotic — the full large-n expansion over integer pairs (r, j) with
               r + j <= kappa - 1, combining the S_2r binomial-expansion
               polynomials with the inverse-map coefficients rho_{j,m}.

Numerical stability rule: the raw theta_m (underflow-scale for m >= 1)
is never materialized. Every mode keeps the scaled coefficient sigma_m
and subtracts the matching 2*pi*shift*m inside a single exponent, the
same cancellation stabilized_term performs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .binom import OVERFLOW_LOG, log_binom_run, log_gamma, recip_gamma, s_polynomials
from .dynamics import PsiExpansion, psi_expansion
from .errors import (
    GammaPole,
    InsufficientPsiOrder,
    PoleAtNonpositiveInteger,
    SpectrumTooShort,
    TermOverflow,
)
from .fourier import Spectrum
from .pgf import OffspringPGF
from .powerseries import TruncatedSeries, pow_complex

_VARIANTS = ("plain", "corrected", "gamma_plain", "gamma_corrected", "asymptotic")


@dataclass(frozen=True)
class ApproxResult:
    """Per-n approximation values for one variant and truncation M.

    `per_m_terms[m]` is the real contribution of mode m (already
    conjugate-doubled for m >= 1) on the same n-grid; the columns sum to
    `values` and are independent of M, so recomputing with a larger M
    reproduces the earlier columns bit for bit.
    """

    variant: str
    M: int
    n_values: tuple[int, ...]
    values: np.ndarray
    per_m_terms: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        arr = np.asarray(self.values, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class RCoefficients:
    """Inverse-map correction coefficients rho[j][m], j = 0..J, m = 0..M."""

    rho: tuple[tuple[complex, ...], ...]

    @property
    def j_max(self) -> int:
        return len(self.rho) - 1

    @property
    def m_max(self) -> int:
        return len(self.rho[0]) - 1


def spectral_exponent(pgf: OffspringPGF, m: int) -> complex:
    """k_m = (2*pi*i*m + ln p1) / ln E, the mode-m power-law exponent."""
    return (2j * math.pi * m + pgf.log_p1) / pgf.log_mean


def r_coefficients(psi: PsiExpansion, pgf: OffspringPGF, j_max: int, m_max: int) -> RCoefficients:
    """rho_{j,m} = [u^j] (1 + psi_2 u + psi_3 u^2 + ...)^(k_m).

    These are the polynomials-in-(2*pi*i*m) weights of the expansion of
    Psi(z)^(k_m) beyond its leading power of (1 - z).

    Raises:
        InsufficientPsiOrder: the expansion carries fewer than j_max + 1
            coefficients.
    """
    if j_max < 0 or m_max < 0:
        raise ValueError("j_max and m_max must be >= 0")
    if psi.order < j_max + 1:
        raise InsufficientPsiOrder(
            f"need psi order >= {j_max + 1}, got {psi.order}"
        )
    # (1 + psi_2 u + psi_3 u^2 + ...): psi_{s} becomes the u^{s-1} coefficient
    base = TruncatedSeries.from_coeffs([1.0, *psi.psi[1 : j_max + 1]], order=j_max)
    rows = []
    for m in range(m_max + 1):
        powered = pow_complex(base, spectral_exponent(pgf, m))
        rows.append(tuple(complex(c) for c in powered.coeffs))
    # stored as rho[j][m]
    rho = tuple(tuple(rows[m][j] for m in range(m_max + 1)) for j in range(j_max + 1))
    return RCoefficients(rho)


def _mode_data(spec: Spectrum, pgf: OffspringPGF, M: int):
    """Per-mode (k_m, sigma_m, 2*pi*shift*m) with sigma_0 = theta_0."""
    if M > spec.m_max:
        raise SpectrumTooShort(f"M = {M} exceeds stored m_max = {spec.m_max}")
    if M < 0:
        raise ValueError("M must be >= 0")
    ks = [spectral_exponent(pgf, m) for m in range(M + 1)]
    sigmas = [complex(spec.theta0)] + list(spec.scaled[:M])
    shifts = [2.0 * math.pi * spec.shift * m for m in range(M + 1)]
    return ks, sigmas, shifts


def _prepare_grid(n_list):
    ns = [int(n) for n in n_list]
    if not ns:
        raise ValueError("n_list must not be empty")
    if any(n < 1 for n in ns):
        raise ValueError("all n must be positive integers")
    order = sorted(set(ns))
    return ns, order


def _binomial_family(spec, pgf, M, n_list, with_correction):
    """Shared core of the plain and corrected variants."""
    ks, sigmas, shifts = _mode_data(spec, pgf, M)
    ns, order = _prepare_grid(n_list)
    n_top = order[-1]
    pos = {n: i for i, n in enumerate(order)}
    # first inverse-map correction weight: rho_{1,m} = psi_2 * k_m
    psi2 = pgf.second_factorial_moment / (2.0 * (pgf.mean**2 - pgf.mean))

    per_m = []
    for m in range(M + 1):
        contrib = np.zeros(len(order))
        runs = [log_binom_run(ks[m], n_top)]
        if with_correction:
            runs.append(log_binom_run(1.0 + ks[m], n_top))
        for entries in zip(*runs):
            n = entries[0][0]
            if n not in pos:
                continue
            term = 0j
            lb0 = entries[0][1]
            if lb0 is not None:
                arg = lb0 - shifts[m]
                if arg.real > OVERFLOW_LOG:
                    raise TermOverflow(f"mode {m} overflows at n={n}")
                term += cmath.exp(arg)
            if with_correction:
                lb1 = entries[1][1]
                if lb1 is not None:
                    arg = lb1 - shifts[m]
                    if arg.real > OVERFLOW_LOG:
                        raise TermOverflow(f"mode {m} correction overflows at n={n}")
                    term += psi2 * ks[m] * cmath.exp(arg)
            term *= sigmas[m]
            sign = 1.0 if n % 2 == 0 else -1.0
            weight = 1.0 if m == 0 else 2.0
            contrib[pos[n]] = sign * weight * term.real
        per_m.append(contrib)

    totals = np.sum(per_m, axis=0)
    values = np.array([totals[pos[n]] for n in ns])
    terms = tuple(np.array([c[pos[n]] for n in ns]) for c in per_m)
    return ns, values, terms


def approx_plain(spec: Spectrum, pgf: OffspringPGF, M: int, n_list) -> ApproxResult:
    """Leading-power approximation: (-1)^n sum_{|m|<=M} C(k_m, n) theta_m."""
    ns, values, terms = _binomial_family(spec, pgf, M, n_list, with_correction=False)
    return ApproxResult("plain", M, tuple(ns), values, terms)


def approx_corrected(spec: Spectrum, pgf: OffspringPGF, M: int, n_list) -> ApproxResult:
    """Plain sum plus the first inverse-map correction per mode:

    (-1)^n sum_{|m|<=M} [ C(k_m, n) + rho_{1,m} C(1 + k_m, n) ] theta_m,
    with rho_{1,m} = P''(1) (2*pi*i*m + ln p1) / (2 (E^2 - E) ln E).
    """
    ns, values, terms = _binomial_family(spec, pgf, M, n_list, with_correction=True)
    return ApproxResult("corrected", M, tuple(ns), values, terms)


def _stable_gamma_weight(sigma, shift, gamma_arg):
    """sigma * exp(-shift) / Gamma(gamma_arg) folded into one magnitude.

    Returns (log_scale, phase_factor) with the convention that the
    mode's n-dependent factor exp(c * ln n) is added to log_scale before
    a single exponentiation. At a Gamma pole the weight is exactly zero
    (entire reciprocal), signalled by phase_factor = None.
    """
    z = complex(gamma_arg)
    if recip_gamma(z) == 0:
        return 0.0, None
    return -shift - log_gamma(z), sigma


def _gamma_family(spec, pgf, M, n_list, corrected):
    ks, sigmas, shifts = _mode_data(spec, pgf, M)
    ns, order = _prepare_grid(n_list)
    pos = {n: i for i, n in enumerate(order)}
    kappa = pgf.kappa
    e = pgf.mean
    c2 = (pgf.second_factorial_moment + e - e * e) / (2.0 * (e * e - e) * pgf.log_mean)

    per_m = []
    for m in range(M + 1):
        contrib = np.zeros(len(order))
        lead_log, lead_sigma = _stable_gamma_weight(sigmas[m], shifts[m], -ks[m])
        corr_log, corr_sigma = _stable_gamma_weight(sigmas[m], shifts[m], -ks[m] - 1.0)
        for n in order:
            ln_n = math.log(n)
            term = 0j
            if lead_sigma is not None:
                term += cmath.exp((-ks[m] - 1.0) * ln_n + lead_log) * lead_sigma
            if corrected and corr_sigma is not None:
                osc = cmath.exp((-ks[m] - 2.0) * ln_n + corr_log)
                term += c2 * (2j * math.pi * m + pgf.log_p1) * osc * corr_sigma
            weight = 1.0 if m == 0 else 2.0
            contrib[pos[n]] = weight * term.real
        per_m.append(contrib)

    totals = np.sum(per_m, axis=0)
    values = np.array([totals[pos[n]] for n in ns])
    terms = tuple(np.array([c[pos[n]] for n in ns]) for c in per_m)
    variant = "gamma_corrected" if corrected else "gamma_plain"
    return ApproxResult(variant, M, tuple(ns), values, terms)


def approx_gamma(
    spec: Spectrum, pgf: OffspringPGF, M: int, n_list, corrected: bool = True
) -> ApproxResult:
    """Gamma-asymptotic variants, purely in powers of n and log-periodic
    oscillations.

    corrected=False replaces each binomial in the plain sum by its
    leading asymptotic n^(-k_m-1)/Gamma(-k_m) (times (-1)^n, which
    cancels the sign prefactor):

        sum_{|m|<=M} theta_m n^(kappa-1) e^(-2 pi i m ln n / ln E) / Gamma(-k_m).

    corrected=True adds the n^(kappa-2) group that combines the
    second-order binomial asymptotics with the first inverse-map
    correction, weighted by (P''(1) + E - E^2) / (2 (E^2 - E) ln E).

    The unbounded 1/Gamma(-k_m) growth in m is cancelled against the
    decay of theta_m inside a single exponent per mode; 1/Gamma is
    treated as entire (exactly zero at the poles), which is the correct
    limit when kappa is an integer.
    """
    return _gamma_family(spec, pgf, M, n_list, corrected)


def approx_asymptotic(spec: Spectrum, pgf: OffspringPGF, M: int, n_list) -> ApproxResult:
    """Full large-n expansion truncated to nonnegative powers of n:

        sum_{0 <= r+j <= kappa-1} n^(kappa-1-r-j) *
            sum_{|m|<=M} S_2r(k_m + j) rho_{j,m} theta_m
                         e^(-2 pi i m ln n / ln E) / Gamma(-k_m - j)

    over integer pairs r, j >= 0; pairs with r + j = kappa - 1 (constant
    order in n) are retained.

    Raises:
        GammaPole: some -k_m - j lands on a nonpositive integer.
    """
    ks, sigmas, shifts = _mode_data(spec, pgf, M)
    ns, order = _prepare_grid(n_list)
    pos = {n: i for i, n in enumerate(order)}
    limit = pgf.kappa - 1.0 + 1e-12
    j_max = int(math.floor(limit))
    pairs = [(r, j) for r in range(j_max + 1) for j in range(j_max + 1) if r + j <= limit]

    psi = psi_expansion(pgf, max(2, j_max + 1))
    rho = r_coefficients(psi, pgf, j_max, M)
    spolys = s_polynomials(j_max)

    per_m = []
    for m in range(M + 1):
        contrib = np.zeros(len(order))
        mode_terms = []
        for r, j in pairs:
            gamma_arg = -ks[m] - j
            try:
                lg = log_gamma(gamma_arg)
            except PoleAtNonpositiveInteger as exc:
                raise GammaPole(
                    f"Gamma(-k_{m} - {j}) pole at {gamma_arg}"
                ) from exc
            coeff = spolys[r](ks[m] + j) * rho.rho[j][m] * sigmas[m]
            mode_terms.append((coeff, -ks[m] - 1.0 - r - j, lg))
        for n in order:
            ln_n = math.log(n)
            term = 0j
            for coeff, exponent, lg in mode_terms:
                term += coeff * cmath.exp(exponent * ln_n - lg - shifts[m])
            weight = 1.0 if m == 0 else 2.0
            contrib[pos[n]] = weight * term.real
        per_m.append(contrib)

    totals = np.sum(per_m, axis=0)
    values = np.array([totals[pos[n]] for n in ns])
    terms = tuple(np.array([c[pos[n]] for n in ns]) for c in per_m)
    return ApproxResult("asymptotic", M, tuple(ns), values, terms)
