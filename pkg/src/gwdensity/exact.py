"""Exact relative limit densities phi_n.

phi_n is the n-th Taylor coefficient of the normalized iterate limit
Phi(z) = lim p1^(-t) P∘...∘P(z), the relative limit density of seeing n
descendants. Two independent routes are provided:

* `exact_coeffs` — the coefficient recurrence obtained by matching
  powers of z in Phi(P(z)) = p1 * Phi(z), valid for any polynomial
  degree;
* `oracle_coeffs` — direct truncated-series composition of the defining
  limit, used as the cross-check oracle for the recurrence.

For cubic offspring polynomials the closed-form power coefficients
c_{n,r} = [z^r] P(z)^n are exposed as `cubic_c` for a third,
term-by-term cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegreeMismatch, IllConditioned
from .pgf import OffspringPGF
from .powerseries import TruncatedSeries, multiply

_CONDITION_FLOOR = 1e-13


@dataclass(frozen=True)
class CoefficientTable:
    """phi_1..phi_n_max plus the method that produced them."""

    values: np.ndarray
    method: str        # 'recurrence' | 'oracle' | 'cubic_closed_form'
    pgf_hash: str

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n_max(self) -> int:
        return len(self.values)

    def phi(self, n: int) -> float:
        return float(self.values[n - 1])


def exact_coeffs(pgf: OffspringPGF, n_max: int) -> CoefficientTable:
    """phi_1..phi_n_max by the coefficient recurrence.

    Matching [z^r] in Phi(P(z)) = p1*Phi(z) gives, for r >= 2,

        phi_r = ( sum_{n<r} phi_n * [z^r] P(z)^n ) / (p1 - p1^r),

    with the powers P^n built incrementally by one short convolution per
    step and the inner sums accumulated as each phi_n becomes known:
    O(n_max^2 * N) time, O(n_max) memory.

    Raises:
        IllConditioned: p1 - p1^r carries no significant digits (p1
            pathologically close to 1).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    p1 = pgf.p1
    p_short = np.zeros(pgf.degree + 1)
    p_short[1:] = pgf.coeffs

    phi = np.zeros(n_max + 1)
    phi[1] = 1.0
    acc = np.zeros(n_max + 1)     # acc[r] = sum over processed n of phi_n * [z^r] P^n
    power = np.zeros(n_max + 1)   # coefficients of P^n for the current n
    power[: min(pgf.degree, n_max) + 1] = p_short[: min(pgf.degree, n_max) + 1]

    p1_pow = p1  # p1^n for the current n
    for n in range(1, n_max):
        acc[n + 1 :] += phi[n] * power[n + 1 :]
        power = np.convolve(power, p_short)[: n_max + 1]
        p1_pow *= p1
        denom = p1 - p1_pow
        if denom <= p1 * _CONDITION_FLOOR:
            raise IllConditioned(f"p1 - p1^{n+1} = {denom!r} has no significant digits")
        phi[n + 1] = acc[n + 1] / denom

    return CoefficientTable(phi[1:], "recurrence", pgf.fingerprint())


def cubic_c(pgf: OffspringPGF, n: int, r: int) -> float:
    """[z^r] P(z)^n for cubic P via the multinomial closed form.

    The sum runs over the integer k with all three factorial arguments
    2n+k-r, r-n-2k, k nonnegative.

    Raises:
        DegreeMismatch: the offspring polynomial is not cubic.
    """
    if pgf.degree != 3:
        raise DegreeMismatch(f"closed form requires degree 3, got {pgf.degree}")
    if not (1 <= n <= r <= 3 * n):
        raise ValueError(f"need 1 <= n <= r <= 3n, got n={n}, r={r}")
    p1, p2, p3 = pgf.coeffs
    total = 0.0
    k_lo = max(0, r - 2 * n)
    k_hi = (r - n) // 2
    for k in range(k_lo, k_hi + 1):
        i = 2 * n + k - r
        j = r - n - 2 * k
        ways = math.comb(n, i) * math.comb(n - i, j)
        total += ways * p1**i * p2**j * p3**k
    return total


def exact_coeffs_cubic(pgf: OffspringPGF, n_max: int) -> CoefficientTable:
    """Recurrence driven by the cubic closed-form coefficients.

    phi_n = sum_{j=1}^{2n/3} c_{n-j,n} phi_{n-j} / (p1 - p1^n); kept as a
    cross-check against the generic convolution route.
    """
    if pgf.degree != 3:
        raise DegreeMismatch(f"closed form requires degree 3, got {pgf.degree}")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    p1 = pgf.p1
    phi = np.zeros(n_max + 1)
    phi[1] = 1.0
    for n in range(2, n_max + 1):
        s = 0.0
        for j in range(1, 2 * n // 3 + 1):
            s += cubic_c(pgf, n - j, n) * phi[n - j]
        phi[n] = s / (p1 - p1**n)
    return CoefficientTable(phi[1:], "cubic_closed_form", pgf.fingerprint())


def oracle_coeffs(pgf: OffspringPGF, n_max: int, iterations: int) -> CoefficientTable:
    """phi_1..phi_n_max by truncated composition of the defining limit.

    Maintains the rescaled iterate W_t = p1^(-t) * P∘...∘P as a truncated
    series; one step applies

        W_{t+1} = sum_j p_j * p1^((j-1)t - 1) * W_t^j,

    which is the composition with P with the p1^(-t-1) scaling folded in
    so nothing overflows. Independent of the recurrence route.

    `iterations` must be large enough that p1^((N-1)*iterations) is
    negligible relative to the coefficients sought.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    p1 = pgf.p1
    w = TruncatedSeries.from_coeffs([0.0, 1.0], order=n_max)
    for t in range(iterations):
        powers = w
        new = np.zeros(n_max + 1)
        for j in range(1, pgf.degree + 1):
            if j > 1:
                powers = multiply(powers, w)
            new = new + pgf.coeffs[j - 1] * p1 ** ((j - 1) * t - 1) * powers.coeffs
        w = TruncatedSeries(new)
    return CoefficientTable(np.asarray(w.coeffs[1:]).real, "oracle", pgf.fingerprint())
