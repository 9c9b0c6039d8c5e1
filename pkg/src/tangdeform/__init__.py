"""Exact deformation theory of homogeneous polynomials.

Jacobian-ideal pieces, Groebner-based smoothness tests, tangential
smoothing and its obstructions, explicit totally tangentially unstable
forms, and brute-force oracles over small prime fields.
"""

__version__ = "0.1.0"

from .errors import AlgebraError
from .poly import HomPoly, ProjPoint, parse_point, parse_poly
from .scalar import GF, QQ, Field, Scalar, int_embed

__all__ = [
    "AlgebraError",
    "Field",
    "GF",
    "HomPoly",
    "ProjPoint",
    "QQ",
    "Scalar",
    "int_embed",
    "parse_point",
    "parse_poly",
]
