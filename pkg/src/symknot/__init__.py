"""Symmetric unions, flat ribbon band diagrams and exact knot invariants."""
from .diagram import KnotDiagram, parse_pd, serialize_pd
from .errors import (
    BandError,
    DiagramError,
    InconsistencyError,
    InputError,
    SymmetricUnionError,
    TangleError,
)
from .flatband import FlatBandDiagram, parse_band, serialize_band
from .invariants import alexander_polynomial, bounds_report, determinant
from .symunion import SymmetricUnionDiagram, parse_su, serialize_su
from .tangles import build_kn

__version__ = "0.1.0"

__all__ = [
    "BandError", "DiagramError", "FlatBandDiagram", "InconsistencyError", "InputError",
    "KnotDiagram", "SymmetricUnionDiagram", "SymmetricUnionError", "TangleError",
    "alexander_polynomial", "bounds_report", "build_kn", "determinant", "parse_band",
    "parse_pd", "parse_su", "serialize_band", "serialize_pd", "serialize_su",
]
