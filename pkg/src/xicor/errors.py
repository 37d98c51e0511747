"""Exception hierarchy shared by the library and the CLI."""


class XiError(ValueError):
    """Base class. ``code`` is the machine-readable tag used by the CLI."""

    code = "error"


class SampleTooSmall(XiError):
    code = "sample_too_small"


class ConstantY(XiError):
    code = "constant_y"


class ConstantX(ConstantY):
    # raised when the reversed direction of the symmetrized statistic would
    # need a non-constant X; subclass so callers can treat both alike
    code = "constant_x"


class NonFiniteValue(XiError):
    code = "non_finite"


class VarianceDegenerate(XiError):
    code = "variance_degenerate"


class DomainError(XiError):
    code = "domain_error"


class TiesInY(XiError):
    """The continuous-Y test was requested on data with duplicated y values."""

    code = "ties_in_y"
