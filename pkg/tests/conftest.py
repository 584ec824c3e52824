import numpy as np
import pytest

from gwdensity.exact import exact_coeffs
from gwdensity.fourier import compute_spectrum
from gwdensity.pgf import build_pgf

# The three cubic distributions studied throughout: moderate, small and
# reciprocal-square p1 (kappa ~ 2.32, 2.76, exactly 2).
EXAMPLE_PROBS = {
    "ex1": [0.2, 0.6, 0.2],
    "ex2": [0.1, 0.5, 0.4],
    "ex3": [0.25, 0.5, 0.25],
}


@pytest.fixture(scope="session")
def pgf1():
    return build_pgf(EXAMPLE_PROBS["ex1"])


@pytest.fixture(scope="session")
def pgf2():
    return build_pgf(EXAMPLE_PROBS["ex2"])


@pytest.fixture(scope="session")
def pgf3():
    return build_pgf(EXAMPLE_PROBS["ex3"])


@pytest.fixture(scope="session")
def example_pgfs(pgf1, pgf2, pgf3):
    return {"ex1": pgf1, "ex2": pgf2, "ex3": pgf3}


@pytest.fixture(scope="session")
def example_spectra(example_pgfs):
    # full nominal shift: the characteristic values quoted for the
    # examples are defined at shift_fraction = 1
    return {
        name: compute_spectrum(p, 3, shift_fraction=1.0)
        for name, p in example_pgfs.items()
    }


@pytest.fixture(scope="session")
def example_exact(example_pgfs):
    return {name: exact_coeffs(p, 1000) for name, p in example_pgfs.items()}


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)


def random_pgf(rng, degree=None):
    """Random valid offspring distribution of degree 2..5."""
    if degree is None:
        degree = int(rng.integers(2, 6))
    probs = rng.uniform(0.05, 1.0, size=degree)
    probs = probs / probs.sum()
    return build_pgf(probs)
