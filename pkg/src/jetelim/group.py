"""The group C x C* acting on the plane, and the constants attached to a point.

A point gamma = (xi, eta) with eta != 0 acts on homogeneous polynomials by
``HomPoly.translate``.  The group law is additive in the first coordinate
and multiplicative in the second:

    (xi, eta) + (xi', eta') = (xi + xi', eta * eta'),
    e = (0, 1),   -(xi, eta) = (-xi, 1/eta).

Each point carries a family of norm-comparison constants used throughout
the estimates:

    c1 = 2 + |xi| + |eta|          (translation length growth)
    c2 = max{1, |xi|, |eta|}       (sup norm of (1, xi, eta))
    c3 = c1(-gamma) * c2           (one division step)
    c4 = 3*c2*exp(2*c2^2)          (distance-to-curve comparison)
    c5 = (2*c2 + 3) * c3^2         (ideal-slice distance comparison)
    c6 = 8 * c1(-gamma)            (convex-body resultant bound)

These are ``Mag`` values: exact Fractions whenever the coordinate moduli
are exact rationals, certified intervals otherwise (c4 always, because of
the exponential).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .scalars import (
    ComplexInterval,
    GaussianRational,
    Mag,
    Scalar,
    coerce_pair,
    exact_is_zero,
    is_exact_scalar,
    iv_exp,
    mag_add,
    mag_max,
    mag_mul,
    mag_pow,
    mag_to_iv,
    scalar_abs,
)

__all__ = ["GroupPoint", "identity"]


def _invert(eta: Scalar) -> Scalar:
    if isinstance(eta, Fraction):
        return Fraction(1) / eta
    if isinstance(eta, int):
        return Fraction(1, eta)
    return eta.inverse()


class GroupPoint:
    """A point (xi, eta) of C x C*."""

    __slots__ = ("xi", "eta")

    def __init__(self, xi: Scalar, eta: Scalar):
        if isinstance(xi, int):
            xi = Fraction(xi)
        if isinstance(eta, int):
            eta = Fraction(eta)
        if exact_is_zero(eta):
            raise ValueError("second coordinate must be invertible")
        if isinstance(eta, ComplexInterval) and eta.contains_zero:
            raise ValueError("second coordinate enclosure contains zero")
        self.xi = xi
        self.eta = eta

    # -- group structure ------------------------------------------------
    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        if not isinstance(other, GroupPoint):
            return NotImplemented
        x1, x2 = coerce_pair(self.xi, other.xi)
        e1, e2 = coerce_pair(self.eta, other.eta)
        return GroupPoint(x1 + x2, e1 * e2)

    def __neg__(self) -> "GroupPoint":
        return GroupPoint(-self.xi, _invert(self.eta))

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, GroupPoint):
            return NotImplemented
        if not (self.is_exact and other.is_exact):
            raise TypeError("equality is only defined for exact points")
        a, b = coerce_pair(self.xi, other.xi)
        c, d = coerce_pair(self.eta, other.eta)
        return a == b and c == d

    def __hash__(self):
        return hash((self.xi, self.eta))

    @property
    def is_exact(self) -> bool:
        return is_exact_scalar(self.xi) and is_exact_scalar(self.eta)

    # -- the constants ----------------------------------------------------
    def c1(self) -> Mag:
        """2 + |xi| + |eta|."""
        return mag_add(mag_add(Fraction(2), scalar_abs(self.xi)),
                       scalar_abs(self.eta))

    def c1_neg(self) -> Mag:
        """c1 of the inverse point: 2 + |xi| + 1/|eta|."""
        abs_eta = scalar_abs(self.eta)
        if isinstance(abs_eta, Fraction):
            inv = Fraction(1) / abs_eta
        else:
            inv = mag_to_iv(Fraction(1)) / abs_eta
        return mag_add(mag_add(Fraction(2), scalar_abs(self.xi)), inv)

    def c2(self) -> Mag:
        """max{1, |xi|, |eta|}; the sup norm of (1, xi, eta)."""
        return mag_max([Fraction(1), scalar_abs(self.xi), scalar_abs(self.eta)])

    def c3(self) -> Mag:
        return mag_mul(self.c1_neg(), self.c2())

    def c4(self) -> Mag:
        """3*c2*exp(2*c2^2); always an interval."""
        c2 = self.c2()
        return mag_to_iv(mag_mul(Fraction(3), c2)) * iv_exp(mag_mul(Fraction(2), mag_pow(c2, 2)))

    def c5(self) -> Mag:
        c2, c3 = self.c2(), self.c3()
        return mag_mul(mag_add(mag_mul(Fraction(2), c2), Fraction(3)),
                       mag_pow(c3, 2))

    def c6(self) -> Mag:
        return mag_mul(Fraction(8), self.c1_neg())

    def __repr__(self):
        return f"GroupPoint({self.xi!r}, {self.eta!r})"


def identity() -> GroupPoint:
    return GroupPoint(Fraction(0), Fraction(1))
