"""Exception types shared across the package."""


class PiekitError(Exception):
    """Base class for all piekit errors."""


class ValidationError(PiekitError):
    """Malformed or inconsistent input: bad file, shape mismatch, violated
    precondition.  The CLI maps this to exit code 2."""


class DegenerateError(PiekitError):
    """Structurally valid input for which the math has no usable answer
    (constant importance vector, collinear design, vanishing sample weights).
    The CLI maps this to exit code 3."""
