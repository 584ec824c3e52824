"""Point evaluation of the conjugacy maps and the inverse-map expansion.

Three functions of one complex variable drive everything here:

* Phi — the linearizer at the attracting fixed point 0, satisfying the
  Schroeder equation Phi(P(z)) = p1 * Phi(z), Phi(0) = 0, Phi'(0) = 1;
  evaluated by the rescaled-iterate recurrence, which converges
  exponentially fast inside the filled Julia set of P.
* Pi — the entire solution of the Poincare equation P(Pi(z)) = Pi(E*z),
  Pi(0) = 1, Pi'(0) = -1; evaluated by composing near-identity inner
  maps backward, which avoids forming 1 - E^(-t) z at large t.
* K* — the additive Karlin-McGregor function
  K*(z) = Phi(Pi(E^z)) * p1^(-z), 1-periodic on a horizontal strip.

`psi_expansion` produces the Taylor coefficients at z = 1 of the inverse
of Pi (the decreasing Schroeder conjugacy Psi with Psi(P(z)) = E*Psi(z)),
solved order by order in powers of (1 - z).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceDetected, MaxIterExceeded
from .pgf import OffspringPGF

DEFAULT_TOL = 1e-13
DEFAULT_MAX_ITER = 10_000
DEFAULT_GUARD_RADIUS = 1e10


@dataclass(frozen=True)
class IterationConfig:
    """Stopping rules shared by the point-evaluation iterations."""

    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    guard_radius: float = DEFAULT_GUARD_RADIUS

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.guard_radius > 1:
            raise ValueError("guard_radius must exceed 1")


DEFAULT_CONFIG = IterationConfig()


@dataclass(frozen=True)
class PsiExpansion:
    """Coefficients psi_1..psi_R of Psi(z) = sum_s psi_s (1-z)^s."""

    psi: tuple[float, ...]

    def __post_init__(self):
        if len(self.psi) < 2:
            raise ValueError("expansion needs order >= 2")
        if self.psi[0] != 1.0:
            raise ValueError("leading coefficient must be exactly 1")

    @property
    def order(self) -> int:
        return len(self.psi)

    def coefficient(self, s: int) -> float:
        """psi_s for 1 <= s <= order."""
        return self.psi[s - 1]


def eval_phi(pgf: OffspringPGF, z, cfg: IterationConfig = DEFAULT_CONFIG) -> complex:
    """Phi(z) by the rescaled-iterate recurrence.

    w_{t+1} = w_t + sum_{j>=2} p_j p1^((j-1)t - 1) w_t^j, starting from
    w_0 = z; stops once the increment falls below cfg.tol.

    Raises:
        DivergenceDetected: |w_t| exceeded cfg.guard_radius — z lies
            outside the filled Julia set, where Phi is undefined.
        MaxIterExceeded: increments still above tol after cfg.max_iter
            steps (z too close to the basin boundary); callers sampling
            a shifted line should retreat the shift instead.
    """
    w = complex(z)
    p1 = pgf.p1
    # geometric factors p_j * p1^((j-1)t - 1), updated by *p1^(j-1) per step
    factors = [pgf.coeffs[j - 1] / p1 for j in range(2, pgf.degree + 1)]
    steps = [p1 ** (j - 1) for j in range(2, pgf.degree + 1)]
    for _ in range(cfg.max_iter):
        inc = 0j
        wp = w
        for f in factors:
            wp *= w
            inc += f * wp
        w_new = w + inc
        if abs(w_new) > cfg.guard_radius:
            raise DivergenceDetected(f"iterate escaped past {cfg.guard_radius:g}")
        if abs(inc) < cfg.tol:
            return w_new
        w = w_new
        factors = [f * s for f, s in zip(factors, steps)]
    raise MaxIterExceeded(f"no convergence within {cfg.max_iter} iterations")


def _pi_depth(pgf: OffspringPGF, z: complex, tol: float) -> int:
    # four extra steps of margin: residual suites compare two evaluations
    # whose independent truncation tails would otherwise sit right at tol
    bound = max(abs(q) for q in pgf.q_coeffs) * (1.0 + abs(z)) ** pgf.degree
    if bound <= tol:
        return 1
    return max(1, 4 + math.ceil(math.log(bound / tol) / pgf.log_mean))


def eval_pi(pgf: OffspringPGF, z, cfg: IterationConfig = DEFAULT_CONFIG) -> complex:
    """Pi(z) by backward composition of the inner maps.

    Picks the depth T with E^(-T) * max_j|q_j| * (1+|z|)^N below cfg.tol,
    then applies h_t(w) = w - sum_j q_j E^(-(j-1)t - j) w^j for
    t = T-1 down to 0 and finishes with the depth-zero iterate 1 - w
    (the composition starts from 1 - E^0 z, not from the identity). The
    maps are near-identity perturbations, so there is no divergence mode
    — only a depth budget.

    Raises:
        MaxIterExceeded: required depth exceeds cfg.max_iter.
    """
    w = complex(z)
    depth = _pi_depth(pgf, w, cfg.tol)
    if depth > cfg.max_iter:
        raise MaxIterExceeded(f"depth {depth} exceeds max_iter {cfg.max_iter}")
    e = pgf.mean
    qs = pgf.q_coeffs
    for t in range(depth - 1, -1, -1):
        corr = 0j
        wp = w
        for j, q in enumerate(qs, start=2):
            wp *= w
            corr += q * e ** (-((j - 1) * t + j)) * wp
        w = w - corr
    return 1.0 - w


def eval_kstar(pgf: OffspringPGF, z, cfg: IterationConfig = DEFAULT_CONFIG) -> complex:
    """K*(z) = Phi(Pi(E^z)) * p1^(-z); defined on a strip |Im z| < theta*.

    Strip violations surface as DivergenceDetected (or MaxIterExceeded
    near the edge) from the inner Phi evaluation.
    """
    z = complex(z)
    inner = eval_pi(pgf, cmath.exp(z * pgf.log_mean), cfg)
    return eval_phi(pgf, inner, cfg) * cmath.exp(-z * pgf.log_p1)


def psi_expansion(pgf: OffspringPGF, order: int) -> PsiExpansion:
    """Solve Psi(P(z)) = E*Psi(z) order by order in u = 1 - z.

    With 1 - P(z) = E*u - sum_j q_j u^j, matching the coefficient of u^s
    isolates psi_s against the denominator (E - E^s), which never
    vanishes for s >= 2 because E > 1. psi_1 = 1 by the normalization
    Psi'(1) = -1.
    """
    if order < 2:
        raise ValueError("order must be >= 2")
    e = pgf.mean
    u_short = np.zeros(pgf.degree + 1)
    u_short[1] = e
    u_short[2:] = [-q for q in pgf.q_coeffs]

    psi = np.zeros(order + 1)
    psi[1] = 1.0
    acc = np.zeros(order + 1)
    power = np.zeros(order + 1)
    power[: min(pgf.degree, order) + 1] = u_short[: min(pgf.degree, order) + 1]

    e_pow = e
    for s in range(1, order):
        acc[s + 1 :] += psi[s] * power[s + 1 :]
        power = np.convolve(power, u_short)[: order + 1]
        e_pow *= e
        psi[s + 1] = acc[s + 1] / (e - e_pow)
    return PsiExpansion(tuple(psi[1:]))
