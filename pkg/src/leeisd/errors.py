class LeeIsdError(Exception):
    """Base class for all package errors."""


class SingularMatrixError(LeeIsdError, ValueError):
    """Matrix has no inverse over the ring (determinant not a unit)."""


class RetrySelection(LeeIsdError):
    """The chosen coordinate split does not come from an information set.

    Raised by :func:`leeisd.ring.find_transform`; decoders catch it and draw a
    new selection. It is not an input error.
    """


class InfeasibleParams(LeeIsdError, ValueError):
    """ISD parameters violate the algorithm's input constraints."""


class BudgetExceeded(LeeIsdError):
    """An exhaustive enumeration would exceed the configured budget."""


class DecryptionFailure(LeeIsdError):
    """Ciphertext could not be decoded with the private key."""


class FormatError(LeeIsdError, ValueError):
    """Malformed text input; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
