"""Certified jets, ideal division, resultants and auxiliary polynomials on C x C*."""

__version__ = "0.1.0"

from .scalars import (  # noqa: F401
    ComplexInterval,
    GaussianRational,
    PrecisionError,
    Verdict,
    get_precision,
    precision,
    set_precision,
)
from .group import GroupPoint, identity  # noqa: F401
from .polys import AffinePoly, HomPoly, binom2, monomials_of_degree  # noqa: F401
