"""Exception types shared across the library.

Everything raised on purpose derives from FibrationError, so callers can
distinguish engine failures from input problems (ParseError,
ValidationError) when choosing an exit code.
"""


class FibrationError(Exception):
    """Base class for all errors raised by this library."""


class DimensionMismatch(FibrationError):
    """Matrix shapes do not compose."""


class CommutationFailure(FibrationError):
    """A square of integer matrices that must commute does not."""


class InvalidProfile(FibrationError):
    """Valuation triple violates the discriminant relation."""


class NotMinimal(FibrationError):
    """Profile still admits a full quadratic/cubic twist."""


class ZeroPolynomial(FibrationError):
    """Valuation of the identically zero polynomial is undefined."""


class DegenerateModel(FibrationError):
    """The discriminant 4a^3 + 27b^2 vanishes identically."""


class LengthMismatch(FibrationError):
    """Paired vectors have different lengths (or are empty)."""


class InvalidCollision(FibrationError):
    """A collision needs both branches inside the discriminant."""


class ProfileInconsistent(FibrationError):
    """Summed branch valuations cannot come from a monomial model."""


class DepthExceeded(FibrationError):
    """Blow-up worklist passed the configured depth bound."""


class NotMirandaAllowed(FibrationError):
    """The collision type is outside the resolvable list."""


class PresentationInconsistent(FibrationError):
    """Component presentation data fails its bookkeeping identities."""


class NegativeCorank(FibrationError):
    """Topological corank formula returned a negative number."""


class AllZero(FibrationError):
    """gcd of an all-zero (or empty) degree list is undefined."""


class Diagnostic:
    """One positioned message attached to an input file."""

    __slots__ = ("line", "column", "message")

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message

    def __str__(self) -> str:
        return f"line {self.line}, col {self.column}: {self.message}"

    def __repr__(self) -> str:
        return f"Diagnostic({self.line}, {self.column}, {self.message!r})"

    def __eq__(self, other):
        if not isinstance(other, Diagnostic):
            return NotImplemented
        return (self.line, self.column, self.message) == (
            other.line,
            other.column,
            other.message,
        )


class ParseError(FibrationError):
    """Syntax errors in a description file, with line/column positions."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class ValidationError(FibrationError):
    """Semantic errors in a parsed description, naming the offender."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))
