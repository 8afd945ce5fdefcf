"""Heights, algebraic distances, derivations and approximation harnesses."""
import sys

from .errors import DiophantError
from .kernels import BACKEND
from .points import EffectiveCycle, ProjectivePoint
from .polycore import HomogeneousPolynomial

__version__ = "0.1.0"

# Liouville-type instances serialize integers with 10^5 digits and more
if hasattr(sys, "set_int_max_str_digits") and 0 < sys.get_int_max_str_digits() < 10**7:
    sys.set_int_max_str_digits(10**7)

__all__ = ["BACKEND", "DiophantError", "EffectiveCycle", "HomogeneousPolynomial",
           "ProjectivePoint", "__version__"]
