"""Exception types carrying machine-readable error codes."""


class HellyLabError(Exception):
    """Base class for all errors raised by hellylab.

    Every subclass carries a ``code`` string that the command line front-end
    reports verbatim, and an exit status.
    """

    code = "ERROR"
    exit_status = 3

    def __init__(self, message="", **context):
        super().__init__(message)
        self.context = context

    def to_dict(self):
        out = {"code": self.code, "message": str(self)}
        out.update({k: v for k, v in self.context.items() if v is not None})
        return out


class ValidationError(HellyLabError, ValueError):
    """Malformed input: bad labels, out-of-range indices, bad parameters."""

    code = "VALIDATION_ERROR"
    exit_status = 2


class CapExceeded(ValidationError):
    """An exhaustive search was asked to run beyond its size cap."""

    code = "CAP_EXCEEDED"


class Unrealizable(HellyLabError):
    """No hypothesis of the class is consistent with the sample."""

    code = "UNREALIZABLE"


class NoProjection(HellyLabError):
    """No hypothesis agrees with the majority vote on the agreement region.

    Raised by the projection operator; it signals that the ``k`` in use is
    below the projection number of the class.
    """

    code = "NO_PROJECTION"


class NotSeparable(HellyLabError):
    """The labeled points cannot be strictly separated by a hyperplane."""

    code = "NOT_SEPARABLE"


class Unrepresentable(HellyLabError):
    """A reconstruction needs a domain point that does not exist."""

    code = "UNREPRESENTABLE"
