"""Rockland-failure certificates for the Dolbeault Laplacian on flag data of U(p,q)."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConsistencyError,
    FlagrockError,
    HypothesisFailedError,
    InvalidFormError,
    InvalidParabolicError,
    NoFiberRootsError,
    UnsupportedFormError,
    ZeroVectorCollapseError,
)
from .field import Q2i, parse_scalar  # noqa: E402
from .rootsys import ParabolicData, Root, build_parabolic, valid_parameters  # noqa: E402
from .spectral import Verdict, analyze  # noqa: E402

__all__ = [
    "__version__",
    "ConsistencyError",
    "FlagrockError",
    "HypothesisFailedError",
    "InvalidFormError",
    "InvalidParabolicError",
    "NoFiberRootsError",
    "UnsupportedFormError",
    "ZeroVectorCollapseError",
    "Q2i",
    "parse_scalar",
    "ParabolicData",
    "Root",
    "build_parabolic",
    "valid_parameters",
    "Verdict",
    "analyze",
]
