"""Exception hierarchy shared by every package.

The CLI maps ``ConfigError`` to exit code 1 and ``NumericalError`` /
``ExportError`` to exit code 2. Everything else is a programming error.
"""


class DklmsError(Exception):
    """Base class for all toolkit errors."""


# ── Configuration ─────────────────────────────────────────────────
class ConfigError(DklmsError):
    """Invalid experiment configuration."""


class ConfigParseError(ConfigError):
    def __init__(self, message: str, line: int = None, key: str = None):
        self.line = line
        self.key = key
        context = []
        if line is not None:
            context.append(f"line {line}")
        if key is not None:
            context.append(f"key '{key}'")
        suffix = f" ({', '.join(context)})" if context else ""
        super().__init__(f"{message}{suffix}")


class ConfigInvalidError(ConfigError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = f"config invariant violated: {invariant}"
        super().__init__(f"{msg}: {detail}" if detail else msg)


# ── Argument contracts ────────────────────────────────────────────
class ValidationError(DklmsError, ValueError):
    """An operation received arguments outside its contract."""


class NotSquareError(ValidationError):
    pass


class NegativeEntryError(ValidationError):
    pass


class RowSumViolationError(ValidationError):
    def __init__(self, row: int, deviation: float):
        self.row = row
        self.deviation = deviation
        super().__init__(f"row {row} sums to 1{deviation:+.3g}")


class ZeroNodesError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class GraphSizeMismatchError(ValidationError):
    pass


class NonFiniteInputError(ValidationError):
    pass


class NegativeVarianceError(ValidationError):
    pass


class SequenceTooShortError(ValidationError):
    pass


class EmptySamplerError(ValidationError):
    pass


class EmptyTraceError(ValidationError):
    pass


class NonSymmetricInputError(ValidationError):
    pass


# ── Numerics ──────────────────────────────────────────────────────
class NumericalError(DklmsError, ArithmeticError):
    """A computation could not produce a finite, meaningful result."""


class NumericalBreakdownError(NumericalError):
    pass


class SingularMatrixError(NumericalError):
    pass


class NonPositiveKernelMeanError(NumericalError):
    pass


# ── Output ────────────────────────────────────────────────────────
class ExportError(DklmsError):
    """Writing an artifact to disk failed."""
