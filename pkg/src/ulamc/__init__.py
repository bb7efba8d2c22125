"""Best Ulam constants of linear constant-coefficient differential operators."""

__version__ = "0.1.0"

from .constant import UlamConstantResult, best_constant, closed_form, upper_bound_miura  # noqa: E402
from .exceptions import (ImaginaryAxisError, MaxDepthExceeded, NotApplicable,  # noqa: E402
                         NumericalError, RepeatedRootsError, UlamError, ValidationError)
from .poly import OperatorSpec, RootSet, parse_complex, roots_from_coeffs  # noqa: E402

__all__ = [
    "__version__", "UlamConstantResult", "best_constant", "closed_form", "upper_bound_miura",
    "ImaginaryAxisError", "MaxDepthExceeded", "NotApplicable", "NumericalError",
    "RepeatedRootsError", "UlamError", "ValidationError",
    "OperatorSpec", "RootSet", "parse_complex", "roots_from_coeffs",
]
