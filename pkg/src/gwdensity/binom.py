"""Generalized binomial coefficients and their asymptotic machinery.

Covers four jobs the spectral approximations lean on:

* principal-branch complex log-gamma (Lanczos rational approximation,
  g = 607/128 with 15 coefficients, reflection for the left half-plane);
* C(k, n) = k(k-1)...(k-n+1)/n! for complex k, computed in log space as
  a sum of logs of the individual factors so the branch never jumps;
* the stabilized product C(k_m, n) * theta_m, evaluated as
  exp(log C - 2*pi*shift*m) * sigma_m so that neither the underflowing
  Fourier coefficient theta_m nor the overflowing exponential prefactor
  is ever formed on its own;
* the even-index polynomials S_0, S_2, S_4, ... appearing in the
  large-n expansion (-1)^n C(k,n) = n^(-k-1)/Gamma(-k) * sum_r S_2r(k)/n^r,
  generated with exact rational coefficients.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PoleAtNonpositiveInteger, TermOverflow

_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

OVERFLOW_LOG = 700.0


def _is_nonpositive_integer(z: complex, tol: float = 1e-14) -> bool:
    if z.imag != 0.0:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


def log_gamma(z) -> complex:
    """Principal-branch log Gamma(z).

    Accurate to better than 1e-13 relative for Re z > 0. The left
    half-plane is reached by the argument recurrence
    log Gamma(z) = log Gamma(z + n) - sum_i Log(z + i) with principal
    logs, whose branch cuts all lie on the negative real axis, so the
    continuation stays on the principal branch (the naive sin-reflection
    does not once Im z != 0).

    Raises:
        PoleAtNonpositiveInteger: z is (numerically) 0, -1, -2, ...
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleAtNonpositiveInteger(f"log_gamma pole at z = {z}")
    if z.real < 0.5:
        n = math.ceil(0.5 - z.real)
        shift = 0j
        for i in range(n):
            shift += cmath.log(z + i)
        return log_gamma(z + n) - shift
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:]):
        acc += c / (z + i)
    t = z + (_LANCZOS_G - 0.5)
    return _HALF_LOG_TWO_PI + (z - 0.5) * cmath.log(t) - t + cmath.log(acc)


def recip_gamma(z) -> complex:
    """1/Gamma(z), entire: exactly 0 at the poles of Gamma."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0j
    return cmath.exp(-log_gamma(z))


def _binom_is_zero(k: complex, n: int) -> bool:
    # C(k, n) vanishes exactly when k is a nonnegative integer below n,
    # because one of the factors k, k-1, ..., k-n+1 is then zero.
    return k.imag == 0.0 and k.real.is_integer() and 0 <= k.real < n


def log_binom(k, n: int) -> complex | None:
    """log C(k, n) as sum_{j<n} log(k - j) - log Gamma(n+1).

    Returns None when the binomial coefficient is exactly zero. Summing
    the logs of the individual factors keeps the imaginary part
    branch-consistent for any complex k; exponentiation recovers the
    true product regardless of the accumulated winding.
    """
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    k = complex(k)
    if n == 0:
        return 0j
    if _binom_is_zero(k, n):
        return None
    acc = 0j
    for j in range(n):
        acc += cmath.log(k - j)
    return acc - log_gamma(n + 1)


def binom_complex(k, n: int) -> complex:
    """Generalized binomial coefficient C(k, n) for complex k, n >= 0."""
    lb = log_binom(k, n)
    if lb is None:
        return 0j
    return cmath.exp(lb)


def log_binom_run(k, n_max: int):
    """Yield (n, log C(k, n)) for n = 1..n_max, reusing partial products.

    The log entry is None from the first exactly-zero factor onward.
    Same algebra as log_binom, one new factor per step; used to evaluate
    long n-grids without O(n) work per point.
    """
    k = complex(k)
    acc = 0j
    dead = False
    for n in range(1, n_max + 1):
        if not dead:
            f = k - (n - 1)
            if f == 0:
                dead = True
            else:
                acc += cmath.log(f)
        yield n, (None if dead else acc - log_gamma(n + 1))


def stabilized_term(k_m, n: int, sigma_m, two_pi_shift_m: float) -> complex:
    """C(k_m, n) * theta_m without forming theta_m.

    `sigma_m` must be the scaled Fourier coefficient
    exp(two_pi_shift_m) * theta_m, as produced on the shifted sampling
    line; the exponential prefactor cancels inside the single exponent.

    Raises:
        TermOverflow: the shifted log magnitude still exceeds ~700,
            which cannot happen for sane spectra and signals bad input.
    """
    lb = log_binom(k_m, n)
    if lb is None:
        return 0j
    arg = lb - two_pi_shift_m
    if arg.real > OVERFLOW_LOG:
        raise TermOverflow(
            f"stabilized term magnitude exp({arg.real:.1f}) overflows at n={n}"
        )
    return cmath.exp(arg) * sigma_m


# --- asymptotic-expansion polynomials ------------------------------------

@dataclass(frozen=True)
class SPolynomial:
    """S_{2r}: degree-2r polynomial with exact rational coefficients."""

    index: int                      # the even index 2r
    coeffs: tuple[Fraction, ...]    # ascending powers of k, length 2r+1

    def __call__(self, k) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * k + float(c)
        return acc


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ]


def _falling_binomial_poly(r: int, j: int):
    """C(-k - r - 1, j) as a polynomial in k, exact coefficients."""
    poly = [Fraction(1)]
    for i in range(j):
        poly = _poly_mul(poly, [Fraction(-(r + 1 + i)), Fraction(-1)])
    fact = Fraction(math.factorial(j))
    return [c / fact for c in poly]


def s_polynomials(r_max: int) -> list[SPolynomial]:
    """Generate S_0 .. S_{2*r_max}.

    Matching powers of 1/n in the shift identity
    (1 - (k+1)/(n+1)) (-1)^n C(k,n) = (-1)^{n+1} C(k,n+1)
    makes the order-(t+1) balance determine S_{2t}:

        t*S_{2t} = sum_{r<t} S_{2r} * [ C(-k-r-1, t+1-r) + (k+1)(-1)^{t-r} ].
    """
    if r_max < 0:
        raise ValueError("r_max must be >= 0")
    polys = [[Fraction(1)]]
    for t in range(1, r_max + 1):
        acc = [Fraction(0)]
        for r in range(t):
            acc = _poly_add(acc, _poly_mul(polys[r], _falling_binomial_poly(r, t + 1 - r)))
            sign = Fraction((-1) ** (t - r))
            shifted = _poly_mul(polys[r], [Fraction(1), Fraction(1)])  # (k+1)*S_2r
            acc = _poly_add(acc, [sign * c for c in shifted])
        s2t = [c / t for c in acc]
        while len(s2t) > 1 and s2t[-1] == 0:
            s2t.pop()
        if len(s2t) != 2 * t + 1:
            raise AssertionError(f"S_{2*t} degree {len(s2t)-1}, expected {2*t}")
        polys.append(s2t)
    return [SPolynomial(2 * r, tuple(p)) for r, p in enumerate(polys)]


def gamma_asymptotic_binom(k, n: int, terms: int) -> complex:
    """Large-n approximation of C(k, n) with `terms` expansion terms:

        C(k, n) ~ (-1)^n * n^(-k-1)/Gamma(-k) * sum_{r<terms} S_2r(k)/n^r.

    Raises:
        PoleAtNonpositiveInteger: -k is a nonpositive integer (the
            prefactor 1/Gamma(-k) degenerates; C(k, n) is then exactly
            zero for n > k and the expansion does not apply).
    """
    if terms < 1:
        raise ValueError("need at least one expansion term")
    if n < 1:
        raise ValueError("n must be a positive integer")
    k = complex(k)
    lg = log_gamma(-k)  # raises at nonpositive-integer poles
    polys = s_polynomials(terms - 1)
    series = 0j
    for r in range(terms):
        series += polys[r](k) / float(n) ** r
    sign = 1.0 if n % 2 == 0 else -1.0
    lead = cmath.exp((-k - 1.0) * math.log(n) - lg)
    return sign * lead * series
