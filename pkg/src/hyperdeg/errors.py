"""Exception hierarchy shared by all hyperdeg modules."""


class HyperdegError(Exception):
    """Base class for all library errors."""


class InvalidInstance(HyperdegError):
    """The degree-sequence instance itself is malformed."""


class ParityViolation(InvalidInstance):
    """Edge size does not divide the degree sum."""


class RangeViolation(InvalidInstance):
    """Some degree is negative or exceeds the per-vertex maximum."""


class DimensionMismatch(InvalidInstance):
    """Length of the degree vector disagrees with the vertex count."""


class DensityDegenerate(HyperdegError):
    """Density is exactly 0 or 1; the requested operation is undefined there."""


class ZeroDegree(HyperdegError):
    """A strategy requiring strictly positive degrees met a zero degree."""


class BudgetExceeded(HyperdegError):
    """An enumeration would exceed the configured operation budget."""


class GridBudgetExceeded(BudgetExceeded):
    """The quadrature grid would exceed the configured evaluation budget."""


class NonConvergence(HyperdegError):
    """The Newton iteration failed to reach the residual tolerance."""


class SingularJacobian(HyperdegError):
    """The Newton system matrix is not positive definite."""


class NotPositiveDefinite(HyperdegError):
    """A symmetric factorization met a non-positive pivot."""


class Unsolved(HyperdegError):
    """An operation requiring a converged solve got an unconverged report."""


class DegenerateDenominator(HyperdegError):
    """A closed-form summation denominator factor is zero at this (n, r)."""


class ExpansionDomainError(HyperdegError):
    """Inputs lie outside the domain of an asymptotic expansion."""
