"""Exception hierarchy shared by all modules."""


class RmtError(Exception):
    """Base class for every error raised by rmtlab."""


class InvalidSpec(RmtError, ValueError):
    pass


class ShapeMismatch(RmtError, ValueError):
    pass


class SizeMismatch(ShapeMismatch):
    pass


class NonHermitian(RmtError, ValueError):
    pass


class NonConvergence(RmtError, ArithmeticError):
    pass


class UnsupportedLaw(RmtError, ValueError):
    pass


class OutOfRange(RmtError, ValueError):
    pass


class BudgetExceeded(RmtError, RuntimeError):
    pass


class QuadratureFailure(RmtError, ArithmeticError):
    pass


class DegenerateFit(RmtError, ValueError):
    pass


class InsufficientReps(RmtError, ValueError):
    pass


class KernelOverflow(RmtError, OverflowError):
    pass


class ConfigError(RmtError, ValueError):
    """Malformed or schema-violating run configuration (CLI exit code 2)."""
