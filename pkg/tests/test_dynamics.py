import cmath
import math

import numpy as np
import pytest

from gwdensity.dynamics import (
    DEFAULT_CONFIG,
    IterationConfig,
    eval_kstar,
    eval_phi,
    eval_pi,
    psi_expansion,
)
from gwdensity.errors import DivergenceDetected
from gwdensity.pgf import evaluate
from conftest import random_pgf

TOL = DEFAULT_CONFIG.tol
RESIDUAL_BOUND = 10.0 * TOL


def disk_points(rng, count, radius):
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, size=count))
    ang = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return r * np.exp(1j * ang)


def test_config_validation():
    with pytest.raises(ValueError):
        IterationConfig(tol=0.0)
    with pytest.raises(ValueError):
        IterationConfig(max_iter=0)
    with pytest.raises(ValueError):
        IterationConfig(guard_radius=0.5)


def test_phi_fixed_point(pgf1):
    assert eval_phi(pgf1, 0.0) == 0.0


def test_phi_schroeder_residual(example_pgfs, rng):
    for p in example_pgfs.values():
        worst = 0.0
        for z in disk_points(rng, 100, 0.9):
            resid = abs(eval_phi(p, evaluate(p, z)) - p.p1 * eval_phi(p, z))
            worst = max(worst, resid)
        assert worst < RESIDUAL_BOUND


def test_phi_taylor_fit_phi2(pgf1):
    # quadratic Taylor coefficient of Phi via a small-circle mean
    r = 0.3
    count = 64
    acc = 0j
    for k in range(count):
        ang = 2.0 * math.pi * k / count
        z = r * cmath.exp(1j * ang)
        acc += eval_phi(pgf1, z) * cmath.exp(-2j * ang)
    phi2 = (acc / count / r**2).real
    assert phi2 == pytest.approx(3.75, abs=1e-9)


def test_phi_divergence_guard(pgf2):
    with pytest.raises(DivergenceDetected):
        eval_phi(pgf2, 3.0)


def test_pi_normalization(example_pgfs):
    for p in example_pgfs.values():
        assert eval_pi(p, 0.0) == 1.0
        h = 1e-8
        deriv = (eval_pi(p, h) - eval_pi(p, 0.0)) / h
        assert deriv.real == pytest.approx(-1.0, abs=1e-6)


def test_pi_poincare_residual(example_pgfs, rng):
    for p in example_pgfs.values():
        worst = 0.0
        for z in disk_points(rng, 100, 2.0):
            resid = abs(evaluate(p, eval_pi(p, z)) - eval_pi(p, p.mean * z))
            worst = max(worst, resid)
        assert worst < RESIDUAL_BOUND


def test_pi_matches_direct_iterate(pgf1):
    # forward composition P^t(1 - E^-t z) at moderate depth agrees
    z = 0.37
    t = 30
    w = 1.0 - pgf1.mean ** (-t) * z
    for _ in range(t):
        w = evaluate(pgf1, w)
    assert eval_pi(pgf1, z) == pytest.approx(w, abs=1e-8)


def test_kstar_periodicity(example_pgfs):
    for p in example_pgfs.values():
        for x in np.arange(0.1, 1.0, 0.1):
            resid = abs(eval_kstar(p, x + 1.0) - eval_kstar(p, x))
            assert resid < RESIDUAL_BOUND


def test_kstar_real_on_real_line(pgf1):
    for x in (0.0, 0.33, 0.8):
        val = eval_kstar(pgf1, x)
        assert abs(val.imag) < RESIDUAL_BOUND


def test_kstar_conjugate_symmetry(example_pgfs):
    for p in example_pgfs.values():
        shift = 0.4 * math.pi / (2.0 * p.log_mean)
        for x in (0.1, 0.5, 0.9):
            a = eval_kstar(p, complex(x, -shift))
            b = eval_kstar(p, complex(x, shift))
            assert abs(a - b.conjugate()) < RESIDUAL_BOUND


def test_theta_invariance_through_image_coordinate(pgf1, rng):
    # the invariant function takes equal values at a coordinate and at the
    # coordinate of its image under one application of P, i.e. x and x+1
    for x in rng.uniform(0.0, 1.0, size=5):
        assert abs(eval_kstar(pgf1, x + 1.0) - eval_kstar(pgf1, x)) < RESIDUAL_BOUND


def test_kstar_mean_matches_theta0(pgf1):
    xs = np.arange(64) / 64.0
    mean = np.mean([eval_kstar(pgf1, x).real for x in xs])
    assert mean == pytest.approx(1.94, abs=0.01)


def test_psi_expansion_normalization(example_pgfs):
    for p in example_pgfs.values():
        psi = psi_expansion(p, 5)
        assert psi.coefficient(1) == 1.0
        assert psi.order == 5


def test_psi2_closed_form(example_pgfs):
    for p in example_pgfs.values():
        psi = psi_expansion(p, 3)
        want = p.second_factorial_moment / (2.0 * (p.mean**2 - p.mean))
        assert psi.coefficient(2) == pytest.approx(want, rel=1e-13)


def test_psi2_example_value(pgf1):
    # 2.4 / (2 * (4 - 2)) = 0.6
    assert psi_expansion(pgf1, 3).coefficient(2) == pytest.approx(0.6, rel=1e-13)


def _psi_point(p, z):
    """Psi(z) via Newton inversion of eval_pi (independent oracle)."""
    y = complex(1.0 - z)
    for _ in range(60):
        f = eval_pi(p, y) - z
        if abs(f) < 1e-13:
            break
        d = 1e-6
        fp = (eval_pi(p, y + d) - eval_pi(p, y - d)) / (2.0 * d)
        y = y - f / fp
    return y


def test_psi3_against_inversion_oracle(pgf1):
    # fit Psi(1-u) = u + psi2 u^2 + ... on a grid near u = 0 and compare
    psi = psi_expansion(pgf1, 6)
    us = np.linspace(0.02, 0.12, 12)
    vals = np.array([_psi_point(pgf1, 1.0 - u).real for u in us])
    coeffs = np.polyfit(us, vals, 5)[::-1]
    assert abs(coeffs[3] - psi.coefficient(3)) < 1e-8


def test_psi_random_pgfs_satisfy_functional_equation(rng):
    # numerically: Psi(P(z)) = E Psi(z) using the truncated expansion near 1
    for _ in range(5):
        p = random_pgf(rng)
        psi = psi_expansion(p, 14)

        def psi_series(z):
            u = 1.0 - z
            acc = 0.0
            for s in range(psi.order, 0, -1):
                acc = (acc + psi.coefficient(s)) * u
            return acc

        for u in (0.01, 0.03):
            z = 1.0 - u
            lhs = psi_series(evaluate(p, z).real)
            rhs = p.mean * psi_series(z)
            assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)
