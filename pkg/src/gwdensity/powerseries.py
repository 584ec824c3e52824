"""Dense truncated power-series arithmetic.

Series are plain coefficient vectors c_0..c_R over real or complex
scalars. Every operation is an exact truncation: the result's
coefficients through order R equal those of the untruncated operation.
Orders stay small enough (a few thousand at most) that dense O(R^2)
convolution is the right tool; no lazy or FFT machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_CONST_TOL = 1e-12


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0..c_R of a power series truncated at order R."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.coeffs))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must form a nonempty 1-d vector")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coeffs(cls, coeffs, order: int | None = None) -> "TruncatedSeries":
        """Build from a coefficient list, padding with zeros up to `order`."""
        arr = np.atleast_1d(np.asarray(coeffs))
        if order is not None:
            if order + 1 < len(arr):
                arr = arr[: order + 1]
            elif order + 1 > len(arr):
                arr = np.concatenate([arr, np.zeros(order + 1 - len(arr), dtype=arr.dtype)])
        return cls(arr)

    def __call__(self, z):
        """Evaluate the truncated polynomial at z (Horner)."""
        acc = 0.0 * z
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc


def multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the shared order."""
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} != {b.order}")
    return TruncatedSeries(np.convolve(a.coeffs, b.coeffs)[: a.order + 1])


def log1p_series(a: TruncatedSeries) -> TruncatedSeries:
    """log(1 + a(z)) through order R; requires a_0 = 0.

    Solved from (1 + a) * c' = a', one coefficient at a time.
    """
    c0 = complex(a.coeffs[0])
    if abs(c0) > _CONST_TOL:
        raise ValueError(f"log1p_series requires zero constant term, got {c0}")
    r = a.order
    av = np.array(a.coeffs, dtype=np.result_type(a.coeffs, float))
    av[0] = 0.0
    out = np.zeros_like(av)
    for n in range(1, r + 1):
        s = n * av[n]
        for i in range(1, n):
            s -= av[i] * (n - i) * out[n - i]
        out[n] = s / n
    return TruncatedSeries(out)


def exp_series(a: TruncatedSeries) -> TruncatedSeries:
    """exp(a(z)) through order R; requires a_0 = 0.

    Solved from b' = a' * b with b_0 = 1.
    """
    c0 = complex(a.coeffs[0])
    if abs(c0) > _CONST_TOL:
        raise ValueError(f"exp_series requires zero constant term, got {c0}")
    r = a.order
    av = np.array(a.coeffs, dtype=np.result_type(a.coeffs, float))
    av[0] = 0.0
    out = np.zeros_like(av)
    out[0] = 1.0
    for n in range(1, r + 1):
        s = 0.0
        for i in range(1, n + 1):
            s += i * av[i] * out[n - i]
        out[n] = s / n
    return TruncatedSeries(out)


def pow_complex(a: TruncatedSeries, k) -> TruncatedSeries:
    """a(z)**k = exp(k * log a(z)) through order R; requires a_0 = 1.

    The exponent k may be any complex number.
    """
    c0 = complex(a.coeffs[0])
    if abs(c0 - 1.0) > _CONST_TOL:
        raise ValueError(f"pow_complex requires unit constant term, got {c0}")
    shifted = np.array(a.coeffs, dtype=np.result_type(a.coeffs, np.asarray(k), float))
    shifted[0] = 0.0
    logs = log1p_series(TruncatedSeries(shifted))
    return exp_series(TruncatedSeries(k * logs.coeffs))
