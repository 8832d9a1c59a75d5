"""Sparse homogeneous polynomials in X0, X1, X2 and their affine shadows.

Representation: a homogeneous polynomial of degree D is a dict mapping
exponent triples ``(a, b, c)`` with ``a + b + c == D`` to nonzero scalar
coefficients (exact zeros are dropped; interval coefficients are kept as
computed).  The canonical term order everywhere is graded lexicographic,
which for fixed degree is plain reverse tuple order:
``(2,0,0) > (1,1,0) > (1,0,1) > (0,2,0) > (0,1,1) > (0,0,2)``.

The two structural operators of the package act here:

* ``derive`` is the derivation  D = X0*d/dX1 + X2*d/dX2,
* ``translate(gamma)`` is the substitution
  ``P(X0, xi*X0 + X1, eta*X2)`` for a group point ``gamma = (xi, eta)``.

They commute: ``translate . derive == derive . translate`` for every
group point, and evaluation obeys
``translate(P, g)(1, g') == P(1, g + g')`` under the group law of
``GroupPoint``.

Affine bivariate polynomials (``AffinePoly`` in X1, X2) carry the affine
derivation D1 = d/dX1 + X2*d/dX2; homogenizing to degree D with
``tilde`` intertwines D1 with D.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .scalars import (
    ComplexInterval,
    GaussianRational,
    Mag,
    Scalar,
    coerce_pair,
    exact_is_zero,
    is_exact_scalar,
    mag_add,
    mag_max,
    scalar_abs,
)

__all__ = [
    "Exponent",
    "HomPoly",
    "AffinePoly",
    "binom2",
    "monomials_of_degree",
]

Exponent = Tuple[int, int, int]

_VARS = ("X0", "X1", "X2")


def binom2(n: int) -> int:
    """binom(n, 2) with the usual convention for n < 2."""
    return n * (n - 1) // 2 if n >= 2 else 0


def monomials_of_degree(d: int) -> List[Exponent]:
    """All exponent triples of total degree d in graded-lex order."""
    out = [(a, b, d - a - b) for a in range(d, -1, -1)
           for b in range(d - a, -1, -1)]
    return out


def _clean(coeffs: Dict[Exponent, Scalar]) -> Dict[Exponent, Scalar]:
    return {e: c for e, c in coeffs.items() if not exact_is_zero(c)}


class HomPoly:
    """A homogeneous ternary polynomial of a fixed degree."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Dict[Exponent, Scalar]):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        for e in coeffs:
            if len(e) != 3 or min(e) < 0 or sum(e) != degree:
                raise ValueError(f"exponent {e} incompatible with degree {degree}")
        self.degree = degree
        self.coeffs = _clean(coeffs)

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(degree: int) -> "HomPoly":
        return HomPoly(degree, {})

    @staticmethod
    def monomial(exponent: Exponent, coeff: Scalar = Fraction(1)) -> "HomPoly":
        return HomPoly(sum(exponent), {tuple(exponent): coeff})

    @staticmethod
    def from_coeff_vector(degree: int, vec: Iterable[Scalar]) -> "HomPoly":
        """Inverse of coeff_vector: scalars listed in graded-lex order."""
        monos = monomials_of_degree(degree)
        vals = list(vec)
        if len(vals) != len(monos):
            raise ValueError("coefficient vector has wrong length")
        return HomPoly(degree, dict(zip(monos, vals)))

    # -- views ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> List[Tuple[Exponent, Scalar]]:
        """Terms in canonical (graded-lex) order."""
        return [(e, self.coeffs[e]) for e in sorted(self.coeffs, reverse=True)]

    def coeff_vector(self) -> List[Scalar]:
        """Dense coefficient list over all degree-D monomials, graded-lex."""
        return [self.coeffs.get(e, Fraction(0)) for e in monomials_of_degree(self.degree)]

    def coeff(self, exponent: Exponent) -> Scalar:
        return self.coeffs.get(tuple(exponent), Fraction(0))

    @property
    def is_exact(self) -> bool:
        return all(is_exact_scalar(c) for c in self.coeffs.values())

    # -- ring operations ------------------------------------------------
    def __add__(self, other: "HomPoly") -> "HomPoly":
        if not isinstance(other, HomPoly):
            return NotImplemented
        if self.degree != other.degree:
            raise ValueError("cannot add homogeneous polynomials of different degrees")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            if e in out:
                a, b = coerce_pair(out[e], c)
                out[e] = a + b
            else:
                out[e] = c
        return HomPoly(self.degree, out)

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self + (-other)

    def __neg__(self) -> "HomPoly":
        return HomPoly(self.degree, {e: -c for e, c in self.coeffs.items()})

    def __mul__(self, other: "HomPoly") -> "HomPoly":
        if not isinstance(other, HomPoly):
            return NotImplemented
        out: Dict[Exponent, Scalar] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                a, b = coerce_pair(c1, c2)
                prod = a * b
                if e in out:
                    x, y = coerce_pair(out[e], prod)
                    out[e] = x + y
                else:
                    out[e] = prod
        return HomPoly(self.degree + other.degree, out)

    def scale(self, c: Scalar) -> "HomPoly":
        out = {}
        for e, v in self.coeffs.items():
            a, b = coerce_pair(v, c)
            out[e] = a * b
        return HomPoly(self.degree, out)

    def mul_monomial(self, exponent: Exponent) -> "HomPoly":
        de = sum(exponent)
        return HomPoly(self.degree + de,
                       {(e[0] + exponent[0], e[1] + exponent[1], e[2] + exponent[2]): c
                        for e, c in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, HomPoly):
            return NotImplemented
        if self.degree != other.degree:
            return False
        if not (self.is_exact and other.is_exact):
            raise TypeError("equality is only defined for exact polynomials")
        keys = set(self.coeffs) | set(other.coeffs)
        for e in keys:
            a, b = coerce_pair(self.coeff(e), other.coeff(e))
            if a != b:
                return False
        return True

    def __hash__(self):
        return hash((self.degree, tuple(self.terms())))

    # -- the derivation D and the translations tau ----------------------
    def derive(self) -> "HomPoly":
        """Apply D = X0*d/dX1 + X2*d/dX2 (degree is preserved)."""
        out: Dict[Exponent, Scalar] = {}
        for (a, b, c), v in self.coeffs.items():
            if b > 0:
                e = (a + 1, b - 1, c)
                t = v * b
                if e in out:
                    x, y = coerce_pair(out[e], t)
                    out[e] = x + y
                else:
                    out[e] = t
            if c > 0:
                e = (a, b, c)
                t = v * c
                if e in out:
                    x, y = coerce_pair(out[e], t)
                    out[e] = x + y
                else:
                    out[e] = t
        return HomPoly(self.degree, out)

    def derive_iter(self, i: int) -> "HomPoly":
        p = self
        for _ in range(i):
            p = p.derive()
        return p

    def translate(self, gamma) -> "HomPoly":
        """tau_gamma: substitute X1 -> xi*X0 + X1 and X2 -> eta*X2."""
        xi, eta = gamma.xi, gamma.eta
        out: Dict[Exponent, Scalar] = {}
        for (a, b, c), v in self.coeffs.items():
            if c:
                ve, etac = coerce_pair(v, eta)
                base = ve * etac ** c
            else:
                base = v
            # (xi*X0 + X1)^b expanded by binomials
            pows: List[Scalar] = [Fraction(1)]
            for _ in range(b):
                p, x = coerce_pair(pows[-1], xi)
                pows.append(p * x)
            for j in range(b + 1):
                # term X0^(a + b - j) X1^j X2^c with binom(b, j) xi^(b-j)
                bj, pw = coerce_pair(base, pows[b - j])
                coeffj = bj * pw * binom_int(b, j)
                e = (a + b - j, j, c)
                if e in out:
                    x, y = coerce_pair(out[e], coeffj)
                    out[e] = x + y
                else:
                    out[e] = coeffj
        return HomPoly(self.degree, out)

    # -- evaluation ------------------------------------------------------
    def eval(self, x0: Scalar, x1: Scalar, x2: Scalar) -> Scalar:
        total: Scalar = Fraction(0)
        for (a, b, c), v in self.coeffs.items():
            term = v
            for base, k in ((x0, a), (x1, b), (x2, c)):
                if k:
                    t, s = coerce_pair(term, base)
                    term = t * s ** k
            x, y = coerce_pair(total, term)
            total = x + y
        return total

    def eval_affine(self, gamma) -> Scalar:
        """P(1, xi, eta) at a group point."""
        return self.eval(Fraction(1), gamma.xi, gamma.eta)

    # -- norms -----------------------------------------------------------
    def max_norm(self) -> Mag:
        """||P||: max absolute value of the coefficients."""
        return mag_max(scalar_abs(c) for c in self.coeffs.values())

    def length(self) -> Mag:
        """L(P): sum of absolute values of the coefficients."""
        out: Mag = Fraction(0)
        for c in self.coeffs.values():
            out = mag_add(out, scalar_abs(c))
        return out

    # -- text form ---------------------------------------------------------
    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        if not self.is_exact:
            raise TypeError("text form is only defined for exact polynomials")
        parts = []
        for e, c in self.terms():
            parts.append(_format_term(e, c))
        return " + ".join(parts)

    @staticmethod
    def parse(text: str, degree: Optional[int] = None) -> "HomPoly":
        return _parse_hompoly(text, degree)

    def __repr__(self):
        if self.is_exact:
            return f"HomPoly({self.degree}, {self.to_text()!r})"
        return f"HomPoly({self.degree}, <{len(self.coeffs)} interval terms>)"


def binom_int(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for j in range(min(k, n - k)):
        out = out * (n - j) // (j + 1)
    return out


def _format_coeff(c: Scalar) -> str:
    if isinstance(c, GaussianRational):
        return str(c)
    return str(c)


def _format_term(e: Exponent, c: Scalar) -> str:
    factors = []
    for name, k in zip(_VARS, e):
        if k == 1:
            factors.append(name)
        elif k > 1:
            factors.append(f"{name}^{k}")
    if not factors:
        return _format_coeff(c)
    if isinstance(c, Fraction) and c == 1:
        return "*".join(factors)
    return "*".join([_format_coeff(c)] + factors)


_TERM_VAR_RE = re.compile(r"^(X[012])(?:\^(\d+))?$")


def _parse_coeff(tok: str) -> Scalar:
    tok = tok.strip()
    if tok.startswith("("):
        return GaussianRational.parse(tok)
    return Fraction(tok)


def _parse_term(term: str) -> Tuple[Exponent, Scalar]:
    factors = [f.strip() for f in term.split("*")]
    coeff: Scalar = Fraction(1)
    expo = [0, 0, 0]
    for i, f in enumerate(factors):
        m = _TERM_VAR_RE.match(f)
        if m:
            var = int(m.group(1)[1])
            expo[var] += int(m.group(2)) if m.group(2) else 1
        else:
            if i != 0:
                raise ValueError(f"coefficient token {f!r} must come first in a term")
            coeff = _parse_coeff(f)
    return (expo[0], expo[1], expo[2]), coeff


def _parse_hompoly(text: str, degree: Optional[int]) -> HomPoly:
    text = text.strip()
    if text == "0":
        if degree is None:
            raise ValueError("the zero polynomial needs an explicit degree")
        return HomPoly.zero(degree)
    coeffs: Dict[Exponent, Scalar] = {}
    degrees = set()
    for term in text.split(" + "):
        e, c = _parse_term(term.strip())
        degrees.add(sum(e))
        if e in coeffs:
            a, b = coerce_pair(coeffs[e], c)
            coeffs[e] = a + b
        else:
            coeffs[e] = c
    if len(degrees) != 1:
        raise ValueError("terms of mixed total degree")
    d = degrees.pop()
    if degree is not None and degree != d:
        raise ValueError(f"expected degree {degree}, parsed degree {d}")
    return HomPoly(d, coeffs)


# ---------------------------------------------------------------------------
# Affine bivariate polynomials
# ---------------------------------------------------------------------------

class AffinePoly:
    """A polynomial in X1, X2 of bounded total degree (sparse dict)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Dict[Tuple[int, int], Scalar]):
        self.coeffs = {e: c for e, c in coeffs.items() if not exact_is_zero(c)}

    @property
    def total_degree(self) -> int:
        return max((a + b for a, b in self.coeffs), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def derive1(self) -> "AffinePoly":
        """Apply D1 = d/dX1 + X2*d/dX2."""
        out: Dict[Tuple[int, int], Scalar] = {}
        for (a, b), v in self.coeffs.items():
            if a > 0:
                e = (a - 1, b)
                t = v * a
                out[e] = out[e] + t if e in out else t
            if b > 0:
                e = (a, b)
                t = v * b
                out[e] = out[e] + t if e in out else t
        return AffinePoly(out)

    def eval(self, x1: Scalar, x2: Scalar) -> Scalar:
        total: Scalar = Fraction(0)
        for (a, b), v in self.coeffs.items():
            term = v
            if a:
                t, s = coerce_pair(term, x1)
                term = t * s ** a
            if b:
                t, s = coerce_pair(term, x2)
                term = t * s ** b
            x, y = coerce_pair(total, term)
            total = x + y
        return total

    def tilde(self, degree: int) -> HomPoly:
        """Homogenize with X0 to the given degree."""
        if degree < self.total_degree:
            raise ValueError("degree too small to homogenize")
        return HomPoly(degree, {(degree - a - b, a, b): c
                                for (a, b), c in self.coeffs.items()})

    @staticmethod
    def from_hom(p: HomPoly) -> "AffinePoly":
        """Set X0 = 1."""
        out: Dict[Tuple[int, int], Scalar] = {}
        for (a, b, c), v in p.coeffs.items():
            e = (b, c)
            if e in out:
                x, y = coerce_pair(out[e], v)
                out[e] = x + y
            else:
                out[e] = v
        return AffinePoly(out)

    def max_norm(self) -> Mag:
        return mag_max(scalar_abs(c) for c in self.coeffs.values())

    def length(self) -> Mag:
        out: Mag = Fraction(0)
        for c in self.coeffs.values():
            out = mag_add(out, scalar_abs(c))
        return out

    def __eq__(self, other):
        if not isinstance(other, AffinePoly):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        for e in keys:
            a, b = coerce_pair(self.coeffs.get(e, Fraction(0)),
                               other.coeffs.get(e, Fraction(0)))
            if a != b:
                return False
        return True

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self):
        return f"AffinePoly({self.coeffs!r})"
