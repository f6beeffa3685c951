"""
Classical algebra: polynomials on products of unit 2-spheres.
"""

from .parser import parse_poly
from .sphere import (
    SitePolynomial,
    format_poly,
    partial_derivative,
    poisson_bracket_single,
    poisson_bracket_tensor,
    poly_add,
    poly_mul,
    poly_scale,
    poly_sub,
    random_poly,
    scale_coordinates,
)
from .supnorm import sup_norm

__all__ = [
    "SitePolynomial",
    "format_poly",
    "parse_poly",
    "partial_derivative",
    "poisson_bracket_single",
    "poisson_bracket_tensor",
    "poly_add",
    "poly_mul",
    "poly_scale",
    "poly_sub",
    "random_poly",
    "scale_coordinates",
    "sup_norm",
]
