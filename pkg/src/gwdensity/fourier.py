"""Fourier coefficients of the periodic function K*.

K* is 1-periodic and analytic on a horizontal strip, so its Fourier
coefficients theta_m decay like exp(-2*pi*width*|m|) — fast enough to
underflow double precision by m = 2 in typical cases. The cure is to
integrate along a shifted line x - i*shift instead of the real axis:
the trapezoid sums there produce the scaled coefficients

    sigma_m = exp(2*pi*shift*m) * theta_m,

which stay O(1) and are exactly what the downstream stabilized term
evaluation wants. theta_0 itself is taken from the unshifted line, where
K* is real and the mean is cheapest and most accurate.

On a uniform grid the trapezoid rule for a periodic analytic integrand
is spectrally accurate, so the grid is simply doubled (reusing previous
samples) until the coefficients stop moving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DEFAULT_CONFIG, IterationConfig, eval_kstar
from .errors import DivergenceDetected, MaxIterExceeded, OutOfRange, ShiftTooLarge
from .pgf import OffspringPGF

DEFAULT_SHIFT_FRACTION = 0.999
DEFAULT_SAMPLE_BUDGET = 8192
_INITIAL_GRID = 64
_SIGMA_REL_TOL = 1e-10
_THETA0_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """theta_0 plus the scaled coefficients sigma_m from one shifted line.

    `scaled[m-1]` holds sigma_m = exp(2*pi*shift*m) * theta_m for
    m = 1..m_max. Negative-m coefficients are never stored; they are the
    conjugates of the positive ones. `line_sup` is the largest sampled
    |K*| on the shifted line (Cauchy bound diagnostic), `samples_used`
    the per-line grid resolution at which the doubling stopped.
    """

    theta0: float
    scaled: tuple[complex, ...]
    shift: float
    samples_used: int
    converged: bool
    line_sup: float

    @property
    def m_max(self) -> int:
        return len(self.scaled)

    def to_metadata(self) -> dict:
        return {
            "theta0": self.theta0,
            "shift": self.shift,
            "scaled": [
                {"m": m, "re": s.real, "im": s.imag}
                for m, s in enumerate(self.scaled, start=1)
            ],
            "samples_used": self.samples_used,
            "converged": self.converged,
        }


def compute_spectrum(
    pgf: OffspringPGF,
    m_max: int,
    shift_fraction: float = DEFAULT_SHIFT_FRACTION,
    cfg: IterationConfig = DEFAULT_CONFIG,
    sample_budget: int = DEFAULT_SAMPLE_BUDGET,
) -> Spectrum:
    """Extract theta_0 and sigma_1..sigma_m_max from line samples of K*.

    The shifted line sits at shift = shift_fraction * pi / (2 ln E); the
    fraction defaults to 0.999 because the nominal edge pi/(2 ln E) may
    graze slow-convergence regions of the inner iteration, and exactly 1
    remains selectable. Both lines (real and shifted) use a uniform grid
    doubled from 64 points until every coefficient moves less than 1e-10
    relative, or the per-line sample budget is exhausted — in which case
    the best estimate is returned with converged=False rather than
    raising.

    Raises:
        ShiftTooLarge: K* is not computable somewhere on the shifted
            line (inner iteration diverged or stalled); lower
            shift_fraction.
    """
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    if not 0.0 < shift_fraction <= 1.0:
        raise ValueError("shift_fraction must lie in (0, 1]")
    if sample_budget < _INITIAL_GRID:
        raise ValueError(f"sample budget below the initial grid {_INITIAL_GRID}")

    shift = shift_fraction * math.pi / (2.0 * pgf.log_mean)

    def line_value(x: float, offset: float) -> complex:
        try:
            return eval_kstar(pgf, complex(x, -offset), cfg)
        except (DivergenceDetected, MaxIterExceeded) as exc:
            raise ShiftTooLarge(
                f"K* not computable at x={x:.6f} on the line Im z = {-offset:.6f}; "
                "reduce shift_fraction"
            ) from exc

    grid_n = _INITIAL_GRID
    shifted = np.array([line_value(i / grid_n, shift) for i in range(grid_n)])
    real_line = np.array([line_value(i / grid_n, 0.0) for i in range(grid_n)])

    def coefficients():
        sig = np.fft.fft(shifted)[: m_max + 1] / len(shifted)
        th0 = real_line.mean()
        return np.concatenate([[th0], sig])

    prev = coefficients()
    converged = False
    while 2 * grid_n <= sample_budget:
        grid_n *= 2
        new_shifted = np.empty(grid_n, dtype=complex)
        new_real = np.empty(grid_n, dtype=complex)
        new_shifted[0::2] = shifted
        new_real[0::2] = real_line
        odd_x = [(2 * i + 1) / grid_n for i in range(grid_n // 2)]
        new_shifted[1::2] = [line_value(x, shift) for x in odd_x]
        new_real[1::2] = [line_value(x, 0.0) for x in odd_x]
        shifted, real_line = new_shifted, new_real

        cur = coefficients()
        rel = np.max(np.abs(cur - prev) / np.maximum(np.abs(cur), 1e-13))
        prev = cur
        if rel < _SIGMA_REL_TOL:
            converged = True
            break

    theta0_c = complex(prev[0])
    if abs(theta0_c.imag) >= _THETA0_IMAG_TOL:
        converged = False

    return Spectrum(
        theta0=float(theta0_c.real),
        scaled=tuple(complex(v) for v in prev[2 : m_max + 2]),
        shift=shift,
        samples_used=grid_n,
        converged=converged,
        line_sup=float(np.max(np.abs(shifted))),
    )


def theta(spec: Spectrum, m: int) -> complex:
    """theta_m for any sign of m, |m| <= m_max.

    Positive m unscale the stored sigma_m; negative m use the conjugate
    symmetry theta_{-m} = conj(theta_m). The exponential unscaling may
    underflow to exactly 0 for large m, which is acceptable: such
    coefficients are below anything double precision can carry.
    """
    if abs(m) > spec.m_max:
        raise OutOfRange(f"|m| = {abs(m)} exceeds m_max = {spec.m_max}")
    if m == 0:
        return complex(spec.theta0)
    val = spec.scaled[abs(m) - 1] * math.exp(-2.0 * math.pi * spec.shift * abs(m))
    return val if m > 0 else val.conjugate()
