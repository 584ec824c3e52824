import cmath
import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from gwdensity.binom import (
    binom_complex,
    gamma_asymptotic_binom,
    log_binom,
    log_binom_run,
    log_gamma,
    recip_gamma,
    s_polynomials,
    stabilized_term,
)
from gwdensity.errors import PoleAtNonpositiveInteger, TermOverflow


def test_log_gamma_known_values():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
    assert log_gamma(0.5).real == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)
    assert log_gamma(5.0).real == pytest.approx(math.log(24.0), rel=1e-14)


def test_log_gamma_vs_mpmath(rng):
    mp.mp.dps = 30
    worst = 0.0
    for _ in range(200):
        z = complex(rng.uniform(-15, 15), rng.uniform(-15, 15))
        if abs(z.imag) < 1e-6 and z.real <= 0.5:
            continue
        want = complex(mp.loggamma(mp.mpc(z)))
        got = log_gamma(z)
        worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    assert worst < 1e-13


def test_log_gamma_poles():
    for z in (0.0, -1.0, -7.0):
        with pytest.raises(PoleAtNonpositiveInteger):
            log_gamma(z)


def test_recip_gamma_zero_at_poles():
    assert recip_gamma(0.0) == 0
    assert recip_gamma(-3.0) == 0
    assert recip_gamma(1.0) == pytest.approx(1.0, rel=1e-14)


def test_binom_trivial():
    k = 0.7 - 2.2j
    assert binom_complex(k, 0) == 1
    assert binom_complex(k, 1) == pytest.approx(k, rel=1e-15)
    assert binom_complex(2.5, 2) == pytest.approx(1.875, rel=1e-14)


def test_binom_exact_zero():
    assert binom_complex(3.0, 5) == 0
    assert log_binom(3.0, 5) is None


def test_binom_log_path_vs_direct_product(rng):
    for _ in range(60):
        k = complex(rng.uniform(-6, 6), rng.uniform(-30, 30))
        n = int(rng.integers(1, 51))
        direct = 1.0 + 0j
        for j in range(n):
            direct *= k - j
        direct /= math.factorial(n)
        got = binom_complex(k, n)
        assert abs(got - direct) / abs(direct) < 1e-12


def test_binom_run_matches_single_calls(rng):
    k = complex(rng.uniform(-4, 0), rng.uniform(0, 20))
    for n, lb in log_binom_run(k, 80):
        single = log_binom(k, n)
        assert abs(lb - single) < 1e-11


def test_pascal_recurrence(rng):
    for _ in range(40):
        k = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        n = int(rng.integers(1, 41))
        lhs = binom_complex(k, n)
        rhs = binom_complex(k - 1, n) + binom_complex(k - 1, n - 1)
        assert abs(lhs - rhs) / max(1e-30, abs(lhs)) < 1e-11


def test_shift_identity(rng):
    # (1 - (k+1)/(n+1)) (-1)^n C(k,n) = (-1)^(n+1) C(k,n+1)
    for _ in range(40):
        k = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        n = int(rng.integers(1, 60))
        sign = (-1.0) ** n
        lhs = (1 - (k + 1) / (n + 1)) * sign * binom_complex(k, n)
        rhs = -sign * binom_complex(k, n + 1)
        assert abs(lhs - rhs) / max(1e-30, abs(rhs)) < 1e-12


def test_stabilized_reduces_to_plain_product(pgf1):
    theta0 = 1.943561
    got = stabilized_term(-pgf1.kappa, 40, theta0, 0.0)
    want = binom_complex(-pgf1.kappa, 40) * theta0
    assert got == pytest.approx(want, rel=1e-13)


def test_stabilized_vs_extended_precision(pgf1, example_spectra):
    # 50-digit brute force of binom * theta against the log-domain path
    spec = example_spectra["ex1"]
    mp.mp.dps = 50
    k1 = (2j * math.pi + pgf1.log_p1) / pgf1.log_mean
    shift = 2.0 * math.pi * spec.shift
    sigma1 = spec.scaled[0]
    theta1 = mp.mpc(sigma1) * mp.e ** (-mp.mpf(shift))
    n = 100
    naive = mp.mpc(1)
    for j in range(n):
        naive *= mp.mpc(k1) - j
    naive = naive / mp.factorial(n) * theta1
    got = stabilized_term(k1, n, sigma1, shift)
    assert abs(got - complex(naive)) / abs(complex(naive)) < 1e-12


def test_stabilized_zero_binomial():
    assert stabilized_term(3.0, 5, 1.0 + 1j, 0.0) == 0


def test_stabilized_overflow_guard():
    with pytest.raises(TermOverflow):
        stabilized_term(-800.0, 900, 1.0, 0.0)


def test_term_magnitude_regression(example_pgfs, example_spectra):
    # m=1 terms stay within 10x the m=0 term across the plotted n range
    for name, p in example_pgfs.items():
        spec = example_spectra[name]
        k0 = p.log_p1 / p.log_mean
        k1 = (2j * math.pi + p.log_p1) / p.log_mean
        shift = 2.0 * math.pi * spec.shift
        for n in (10, 100, 1000):
            t0 = abs(stabilized_term(k0, n, spec.theta0, 0.0))
            t1 = abs(stabilized_term(k1, n, spec.scaled[0], shift))
            assert t1 <= 10.0 * t0


def test_s_polynomials_closed_forms():
    s = s_polynomials(2)
    assert s[0].coeffs == (Fraction(1),)
    # S_2 = k(k+1)/2
    assert s[1].coeffs == (Fraction(0), Fraction(1, 2), Fraction(1, 2))
    # S_4 = k(k+1)(k+2)(3k+1)/24 = (2k + 7k^2 + 7k^3 + 3k^4... ) expand:
    # k(k+1)(k+2)(3k+1) = 3k^4 + 10k^3 + 9k^2 + 2k
    assert s[2].coeffs == (
        Fraction(0),
        Fraction(2, 24),
        Fraction(9, 24),
        Fraction(10, 24),
        Fraction(3, 24),
    )


def test_s_polynomials_structure():
    polys = s_polynomials(3)
    for r, sp in enumerate(polys):
        assert sp.index == 2 * r
        assert len(sp.coeffs) == 2 * r + 1
        if r >= 1:
            assert sp(0.0) == 0


def test_asymptotic_order_of_s2_truncation():
    # with S_0 and S_2 kept, the remainder decays one power faster than 1/n
    k = -2.3
    for n in (100, 1000, 10000):
        exactv = binom_complex(k, n)
        approx2 = gamma_asymptotic_binom(k, n, 2)
        resid = abs(approx2 - exactv) / abs(exactv)
        assert resid < 40.0 / n**2  # O(n^-2) envelope with measured constant


def test_gamma_asymptotic_leading_term(rng):
    # one term reproduces (-1)^n n^(-k-1)/Gamma(-k); ratio to the exact
    # binomial tends to 1
    k = -2.3219
    lead = gamma_asymptotic_binom(k, 1000, 1)
    want = (-1.0) ** 1000 * 1000.0 ** (-k - 1) / math.gamma(-k)
    assert lead == pytest.approx(want, rel=1e-13)
    ratios = [
        abs(gamma_asymptotic_binom(k, n, 1) / binom_complex(k, n) - 1.0)
        for n in (100, 1000, 10000)
    ]
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[2] < 1e-3


def test_gamma_asymptotic_two_terms_accuracy():
    k = -2.3219
    n = 500
    rel = abs(gamma_asymptotic_binom(k, n, 2) - binom_complex(k, n)) / abs(
        binom_complex(k, n)
    )
    assert rel < 1e-3


def test_gamma_asymptotic_pole():
    with pytest.raises(PoleAtNonpositiveInteger):
        gamma_asymptotic_binom(2.0, 10, 2)
