"""Conversions between HomPoly and sympy for gcd and factorization work.

Only exact polynomials cross this bridge.  Rational coefficients map to
the QQ domain and Gaussian rationals to QQ_I; factorizations over Q are
the ones the divisibility lemmas are stated for.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

import sympy
from sympy import I as _I

from .polys import Exponent, HomPoly
from .scalars import GaussianRational

__all__ = [
    "SYM_VARS",
    "to_sympy_expr",
    "from_sympy_expr",
    "hom_gcd",
    "hom_factor_list",
    "hom_divides",
    "is_irreducible",
]

SYM_VARS = sympy.symbols("X0 X1 X2")


def _coeff_to_sympy(c):
    if isinstance(c, (int, Fraction)):
        f = Fraction(c)
        return sympy.Rational(f.numerator, f.denominator)
    if isinstance(c, GaussianRational):
        return (sympy.Rational(c.re.numerator, c.re.denominator)
                + _I * sympy.Rational(c.im.numerator, c.im.denominator))
    raise TypeError("only exact coefficients cross the sympy bridge")


def to_sympy_expr(p: HomPoly):
    x0, x1, x2 = SYM_VARS
    expr = sympy.Integer(0)
    for (a, b, c), v in p.terms():
        expr += _coeff_to_sympy(v) * x0**a * x1**b * x2**c
    return expr


def _coeff_from_sympy(c) -> object:
    re, im = sympy.sympify(c).as_real_imag()
    if not (re.is_Rational and im.is_Rational):
        raise TypeError(f"non-rational sympy coefficient {c!r}")
    if im == 0:
        return Fraction(int(re.p), int(re.q))
    return GaussianRational(Fraction(int(re.p), int(re.q)),
                            Fraction(int(im.p), int(im.q)))


def from_sympy_expr(expr, degree=None) -> HomPoly:
    poly = sympy.Poly(sympy.expand(expr), *SYM_VARS)
    coeffs: Dict[Exponent, object] = {}
    for monom, coeff in poly.terms():
        coeffs[tuple(monom)] = _coeff_from_sympy(coeff)
    if not coeffs:
        if degree is None:
            raise ValueError("zero polynomial needs an explicit degree")
        return HomPoly.zero(degree)
    degs = {sum(e) for e in coeffs}
    if len(degs) != 1:
        raise ValueError("sympy expression is not homogeneous")
    return HomPoly(degs.pop(), coeffs)


def hom_gcd(p: HomPoly, q: HomPoly) -> HomPoly:
    g = sympy.gcd(to_sympy_expr(p), to_sympy_expr(q), *SYM_VARS)
    return from_sympy_expr(g, degree=0)


def hom_factor_list(p: HomPoly) -> List[Tuple[HomPoly, int]]:
    """Irreducible factorization over Q (or Q(i) for Gaussian input)."""
    gaussian = not all(isinstance(v, (int, Fraction)) for v in p.coeffs.values())
    _, factors = sympy.factor_list(to_sympy_expr(p), *SYM_VARS,
                                   extension=[_I] if gaussian else None)
    return [(from_sympy_expr(f), m) for f, m in factors]


def hom_divides(r: HomPoly, p: HomPoly) -> bool:
    """Exact divisibility r | p."""
    if p.is_zero:
        return True
    if r.is_zero:
        return False
    _, rem = sympy.div(to_sympy_expr(p), to_sympy_expr(r), *SYM_VARS)
    return sympy.expand(rem) == 0


def is_irreducible(p: HomPoly) -> bool:
    if p.is_zero or p.degree == 0:
        return False
    factors = hom_factor_list(p)
    nontrivial = [(f, m) for f, m in factors if f.degree > 0]
    return len(nontrivial) == 1 and nontrivial[0][1] == 1
