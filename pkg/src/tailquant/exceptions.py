"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 1,
infeasible computations exit 2, I/O errors exit 3.
"""


class ValidationError(ValueError):
    """Input violates a documented precondition or file schema."""


class InfeasibleError(RuntimeError):
    """The requested quantity cannot be computed at this sample size or level."""


class DegenerateTailError(InfeasibleError):
    """Tied order statistics zeroed out a self-normalizing denominator."""
