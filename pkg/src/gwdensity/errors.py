"""Exception types shared across the package."""


class BranchingError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidDistribution(BranchingError, ValueError):
    """Offspring probabilities fail validation (negativity, sum, p1 range)."""


class DegenerateDegree(BranchingError, ValueError):
    """Offspring polynomial has degree below 2 after trailing-zero stripping."""


class DivergenceDetected(BranchingError, ArithmeticError):
    """Iterates blew past the guard radius; the point escapes the basin."""


class MaxIterExceeded(BranchingError, RuntimeError):
    """Iteration budget exhausted before the increment dropped below tol."""


class ShiftTooLarge(BranchingError, RuntimeError):
    """The shifted sampling line leaves the domain where K* is computable."""


class PoleAtNonpositiveInteger(BranchingError, ValueError):
    """log-gamma requested at a pole of the gamma function."""


class GammaPole(BranchingError, ArithmeticError):
    """A gamma denominator in an asymptotic sum hit a nonpositive integer."""


class TermOverflow(BranchingError, OverflowError):
    """A stabilized binomial term would overflow even after shift removal."""


class IllConditioned(BranchingError, ArithmeticError):
    """The recurrence denominator p1 - p1^r lost all significant digits."""


class DegreeMismatch(BranchingError, ValueError):
    """Operation requires a specific polynomial degree (cubic closed form)."""


class SpectrumTooShort(BranchingError, ValueError):
    """Requested truncation order M exceeds the coefficients stored."""


class InsufficientPsiOrder(BranchingError, ValueError):
    """The inverse-map expansion carries too few coefficients for J."""


class OutOfRange(BranchingError, IndexError):
    """Fourier coefficient index outside the computed range."""
