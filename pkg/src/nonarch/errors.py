"""Exception hierarchy for the toolkit.

Every domain error raised by the library derives from ToolkitError and
carries a short machine-readable ``code`` used by the CLI to emit
structured JSON errors.
"""


class ToolkitError(Exception):
    code = "error"


class InsufficientPrecision(ToolkitError):
    """An operation needs more p-adic digits or series coefficients than supplied."""

    code = "insufficient-precision"


class DivisionByZero(ToolkitError, ZeroDivisionError):
    code = "division-by-zero"


class NotOneUnit(ToolkitError):
    """Argument is not congruent to 1 modulo the uniformizer."""

    code = "not-one-unit"


class NotAnalytic(ToolkitError):
    """A coefficient required to lie in the prime field does not."""

    code = "not-analytic"


class HorizonExceeded(ToolkitError):
    """A character was probed on a generator beyond its stored horizon."""

    code = "horizon-exceeded"


class PivotFailure(ToolkitError):
    """The preimage recursion found no admissible pivot; precondition violated."""

    code = "pivot-failure"
