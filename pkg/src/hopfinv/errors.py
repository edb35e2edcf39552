"""Exception types shared across the toolkit."""


class HopfInvError(Exception):
    pass


class ArgumentError(HopfInvError, ValueError):
    """Bad arguments: mismatched lengths, spaces, charts or degrees."""


class UnsupportedError(HopfInvError):
    """Input outside the supported scope (non-minimal, degree < 2, ...)."""


class TruncationError(HopfInvError):
    """A computation would need data beyond the declared cutoffs."""


class InvalidMCError(HopfInvError):
    """An element fails the Maurer-Cartan equation."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CoherenceError(HopfInvError):
    """An infinity-morphism failed to carry MC elements to MC elements."""


class InvalidInputError(HopfInvError):
    """Structured input failed validation (e.g. a non-Leibniz product)."""


class InvalidComplexError(HopfInvError):
    """Cell attached to cells of equal or higher degree."""


class DomainError(HopfInvError, ArithmeticError):
    """Non-finite value met during numerical evaluation."""


class UnsupportedWeightError(UnsupportedError):
    """A weight >= 2 term needs a primitive that was not registered."""


class SchemaError(HopfInvError):
    """Definition file does not match the expected schema."""
