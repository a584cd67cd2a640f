"""Exact and numeric tools for the coordinates u_r on symmetric functions and their dual operators."""

from .combinatorics import Partition, enumerate_partitions
from .exact_algebra import PolyN, RationalFuncX, RationalOfN, SparsePoly, exact_divide
from .symmetric_basis import NormalizationTag, SymExpr, build_u, convert_basis
from .divided_difference import apply_DI, apply_Dd, apply_Dhat, check_duality
from .diagonal import CoincidencePattern, apply_Dd_at_point, diag_combo, detect_pattern
from .asymptotics import decay_table, derivative_constant, limit_to_power_sum

__version__ = "0.1.0"

__all__ = [
    "CoincidencePattern", "NormalizationTag", "Partition", "PolyN", "RationalFuncX", "RationalOfN",
    "SparsePoly", "SymExpr", "apply_DI", "apply_Dd", "apply_Dd_at_point", "apply_Dhat", "build_u",
    "check_duality", "convert_basis", "decay_table", "derivative_constant", "detect_pattern",
    "diag_combo", "enumerate_partitions", "exact_divide", "limit_to_power_sum",
]
