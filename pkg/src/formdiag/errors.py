"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Field configuration is invalid."""


class UnknownRadicalError(ValueError):
    """A radical literal does not belong to the configured tower."""


class FormSyntaxError(ValueError):
    """Polynomial or scalar text cannot be parsed."""


class NotHomogeneousError(ValueError):
    """Parsed polynomial has terms of unequal degree."""


class DegreeTooLowError(ValueError):
    """The degree of the form is below 3."""


class DimensionMismatchError(ValueError):
    """Operands have incompatible dimensions."""


class IndexRangeError(IndexError):
    """A tensor index lies outside 1..n."""


class NotSquareError(ValueError):
    """A square matrix was required."""


class NotRealError(ValueError):
    """Real entries were required."""


class NotClosedError(RuntimeError):
    """A product left the spanned algebra (degenerate input or a bug)."""


class DegenerateFormError(ValueError):
    """The operation requires a nondegenerate form."""
