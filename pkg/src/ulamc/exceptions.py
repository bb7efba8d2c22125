"""Exception hierarchy for ulamc."""


class UlamError(Exception):
    """Base class for all ulamc errors."""


class ValidationError(UlamError):
    """The operator falls outside the distinct, off-axis root setting.

    ``tag`` is the classification tag ("ImaginaryAxis" or "Repeated") and
    ``detail`` the offending root index (0-based), when known.
    """

    tag = "Invalid"

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class ImaginaryAxisError(ValidationError):
    tag = "ImaginaryAxis"


class RepeatedRootsError(ValidationError):
    tag = "Repeated"


class NotApplicable(UlamError):
    """A closed-form shortcut was requested for a root set it does not cover."""


class NumericalError(UlamError):
    """A numerical routine failed to reach its accuracy contract."""


class MaxDepthExceeded(NumericalError):
    """Adaptive quadrature ran out of subdivisions before meeting the tolerance."""
