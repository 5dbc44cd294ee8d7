"""Positive radial momentum operators on the half-line.

Discrete DST-I models of z+, (z+)^-1, p+ and p_r^2, together with the
quadrature realizations (Fourier and Hilbert transforms, Erdelyi-Kober
integrals) used to check the continuum identities they satisfy.
"""

from .errors import (
    IncompatibleOperandsError,
    InvalidArgumentError,
    MalformedInputError,
    NotSymmetricError,
    RadialError,
    SingularPointError,
    UnsupportedDecayError,
    UnsupportedRealizationError,
)
from .functions import Decay, Family, FunctionDescriptor, parse_descriptor
from .grid import RadialGrid, SampledFunction, Space, make_grid, read_csv, sample, write_csv
from .opmatrix import OperatorMatrix, build_matrix, min_eigenvalue, quadratic_form, symmetry_defect
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings
from .radialops import OperatorKind, OperatorSpec, Realization

__all__ = [
    "DEFAULT_SETTINGS",
    "Decay",
    "Family",
    "FunctionDescriptor",
    "IncompatibleOperandsError",
    "InvalidArgumentError",
    "MalformedInputError",
    "NotSymmetricError",
    "OperatorKind",
    "OperatorMatrix",
    "OperatorSpec",
    "QuadratureSettings",
    "RadialError",
    "RadialGrid",
    "Realization",
    "SampledFunction",
    "SingularPointError",
    "Space",
    "UnsupportedDecayError",
    "UnsupportedRealizationError",
    "build_matrix",
    "make_grid",
    "min_eigenvalue",
    "parse_descriptor",
    "quadratic_form",
    "read_csv",
    "sample",
    "symmetry_defect",
    "write_csv",
]
