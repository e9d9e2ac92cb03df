"""b-functions of quiver semi-invariants by slicing, reflections and a brute-force oracle."""
from .bpoly import FactorProduct, LinearFactor, bracket, equal_up_to_scalar
from .candecomp import dn_canonical, generic_decomposition
from .quiver import Quiver, convert_weight, coxeter_matrix, euler_form, validate_quiver
from .reflection import run_reflect
from .slicing import NotSliceable, run_slice

__all__ = [
    "FactorProduct", "LinearFactor", "NotSliceable", "Quiver", "bracket", "convert_weight",
    "coxeter_matrix", "dn_canonical", "equal_up_to_scalar", "euler_form", "generic_decomposition",
    "run_reflect", "run_slice", "validate_quiver",
]
