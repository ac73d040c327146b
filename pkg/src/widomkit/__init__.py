"""Equilibrium measures, Jacobi coefficients, Widom factors and Chebyshev
numbers on finite unions of real intervals."""

from .chebyshev import ChebyshevResult, remez_chebyshev, sup_norm_on_union, widom_vs_chebyshev
from .errors import InputError, InvariantViolation, NumericalError, WidomError
from .experiments import NestedFamily, cantor_prefix_family, run_study, theorem3_mechanism_check, unboundedness_scan
from .intervals import IntervalUnion, affine_map, normalize_union, parse_bands
from .jacobi import JacobiData, WidomSeries, equilibrium_jacobi, recurrence_coefficients, widom_factors
from .potential import PotentialData, build_potential, equilibrium_density, green_function
from .quadrature import QuadratureConfig
from .tset import TSetData, preimage_bands

__all__ = [
    "ChebyshevResult",
    "InputError",
    "IntervalUnion",
    "InvariantViolation",
    "JacobiData",
    "NestedFamily",
    "NumericalError",
    "PotentialData",
    "QuadratureConfig",
    "TSetData",
    "WidomError",
    "WidomSeries",
    "affine_map",
    "build_potential",
    "cantor_prefix_family",
    "equilibrium_density",
    "equilibrium_jacobi",
    "green_function",
    "normalize_union",
    "parse_bands",
    "preimage_bands",
    "recurrence_coefficients",
    "remez_chebyshev",
    "run_study",
    "sup_norm_on_union",
    "theorem3_mechanism_check",
    "unboundedness_scan",
    "widom_factors",
    "widom_vs_chebyshev",
]
