"""Offspring distributions and their derived constants.

An offspring distribution here is a probability polynomial
P(z) = p1*z + p2*z^2 + ... + pN*z^N (no extinction: the zero-offspring
probability is fixed at 0, and 0 < p1 < 1 so the linearization at the
fixed point 0 is nontrivial). Everything downstream consumes constants
derived from it: the mean E = P'(1) > 1, the second factorial moment
P''(1), the coefficients of the polynomial rebased around z = 1, and the
power-law exponent kappa = -ln(p1)/ln(E).
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass

from .errors import DegenerateDegree, InvalidDistribution

PROB_SUM_TOL = 1e-12


class LatticeSupportWarning(UserWarning):
    """Some interior offspring probability is zero.

    The exact coefficient recurrence remains valid, but the spectral
    approximations assume all-positive coefficients; results built from
    such a distribution are flagged unreliable in CLI metadata.
    """


@dataclass(frozen=True)
class OffspringPGF:
    """Validated offspring polynomial with precomputed constants.

    Immutable after construction; safe to share across threads.
    """

    coeffs: tuple[float, ...]          # p_1..p_N (p_0 is implicitly 0)
    degree: int                        # N >= 2
    mean: float                        # E = sum j*p_j
    second_factorial_moment: float     # P''(1) = sum j*(j-1)*p_j
    q_coeffs: tuple[float, ...]        # q_2..q_N of the (1-z)-rebased form
    log_p1: float
    log_mean: float
    kappa: float                       # -ln(p1)/ln(E)
    lattice: bool                      # any interior p_j == 0

    @property
    def p1(self) -> float:
        return self.coeffs[0]

    def prob(self, j: int) -> float:
        """p_j for 0 <= j <= degree."""
        if j == 0:
            return 0.0
        return self.coeffs[j - 1]

    def fingerprint(self) -> str:
        """Short stable identifier of the distribution."""
        text = ",".join(format(p, ".17g") for p in self.coeffs)
        return hashlib.sha1(text.encode()).hexdigest()[:12]


def build_pgf(probs) -> OffspringPGF:
    """Validate p_1..p_N and precompute all derived constants.

    Probabilities must be nonnegative and sum to 1 within 1e-12 (they are
    renormalized only inside that tolerance; anything worse is rejected
    rather than silently fixed). Trailing zero entries are stripped so
    `degree` reflects the true polynomial degree. A zero entry strictly
    inside the support triggers a non-fatal LatticeSupportWarning.

    Raises:
        DegenerateDegree: fewer than two effective coefficients (N < 2)
        InvalidDistribution: negative entry, bad sum, or p1 outside (0, 1)
    """
    probs = [float(p) for p in probs]
    if len(probs) < 2:
        raise DegenerateDegree(f"need p_1..p_N with N >= 2, got {len(probs)} entries")
    for p in probs:
        if not math.isfinite(p) or p < 0.0:
            raise InvalidDistribution(f"probabilities must be finite and >= 0, got {p}")
    while probs and probs[-1] == 0.0:
        probs.pop()
    if len(probs) < 2:
        raise DegenerateDegree("effective degree below 2 after stripping trailing zeros")

    total = math.fsum(probs)
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise InvalidDistribution(f"probabilities sum to {total!r}, not 1 within {PROB_SUM_TOL}")
    probs = [p / total for p in probs]

    p1 = probs[0]
    if not 0.0 < p1 < 1.0:
        raise InvalidDistribution(f"p1 must lie strictly in (0, 1), got {p1}")

    n = len(probs)
    mean = math.fsum(j * p for j, p in enumerate(probs, start=1))
    second = math.fsum(j * (j - 1) * p for j, p in enumerate(probs, start=1))
    if mean <= 1.0:
        raise InvalidDistribution(f"mean offspring must exceed 1, got {mean}")

    # Rebase around z = 1 by exact binomial expansion of (1-u)^k: the
    # coefficient of u^i is (-1)^i * sum_k p_k * C(k, i).
    q = tuple(
        float((-1) ** i) * math.fsum(probs[k - 1] * math.comb(k, i) for k in range(i, n + 1))
        for i in range(2, n + 1)
    )

    lattice = any(p == 0.0 for p in probs[1:-1])
    if lattice:
        warnings.warn(
            "offspring distribution has zero interior coefficients; spectral "
            "approximations are unreliable on lattice support",
            LatticeSupportWarning,
            stacklevel=2,
        )

    return OffspringPGF(
        coeffs=tuple(probs),
        degree=n,
        mean=mean,
        second_factorial_moment=second,
        q_coeffs=q,
        log_p1=math.log(p1),
        log_mean=math.log(mean),
        kappa=-math.log(p1) / math.log(mean),
        lattice=lattice,
    )


def evaluate(pgf: OffspringPGF, z) -> complex:
    """P(z) = sum p_j z^j by Horner evaluation (works for complex z)."""
    acc = 0j
    for p in reversed(pgf.coeffs):
        acc = acc * z + p
    return acc * z


def evaluate_rebased(pgf: OffspringPGF, z) -> complex:
    """P(z) through the form 1 - E*(1-z) + sum_j q_j*(1-z)^j."""
    u = 1.0 - z
    acc = 0j
    for q in reversed(pgf.q_coeffs):
        acc = (acc + q) * u
    return 1.0 - pgf.mean * u + acc * u


def to_metadata(pgf: OffspringPGF) -> dict:
    """JSON-ready block of the derived constants, embedded in CLI output."""
    return {
        "probs": list(pgf.coeffs),
        "degree": pgf.degree,
        "mean": pgf.mean,
        "second_factorial_moment": pgf.second_factorial_moment,
        "q_coeffs": list(pgf.q_coeffs),
        "log_p1": pgf.log_p1,
        "log_mean": pgf.log_mean,
        "kappa": pgf.kappa,
        "lattice": pgf.lattice,
        "fingerprint": pgf.fingerprint(),
    }
