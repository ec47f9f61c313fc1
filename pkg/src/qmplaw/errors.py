"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NonConvergentError(RuntimeError):
    """An infinite product/sum failed to reach its truncation criterion."""


class ResourceLimitError(RuntimeError):
    """A brute-force enumeration exceeded its configured node cap."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature could not certify the requested tolerance."""


class EigensolveError(RuntimeError):
    """The symmetric tridiagonal eigenvalue iteration did not converge."""


class ConstraintViolationError(ValueError):
    """A density profile violates the upper constraint 1/(lambda*x)."""


class RootBracketError(RuntimeError):
    """No sign change found while bracketing a root."""
