"""Small real number fields Q[t]/(f), degree at most four.

Elements are polynomial residues with exact rational coordinates; the
field supplies certified enclosures of its real roots so an element can
be embedded into interval arithmetic.  This is all the exact-vanishing
search needs: kernels are computed with the generic exact linear
algebra, and the chosen embedding only matters when reporting numbers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy

from .scalars import iv, iv_from_fraction

__all__ = ["NumberField", "NFElement"]


def _poly_trim(cs: List[Fraction]) -> List[Fraction]:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _poly_divmod(a: List[Fraction], b: List[Fraction]
                 ) -> Tuple[List[Fraction], List[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        d = len(a) - len(b)
        q[d] = c
        for i, bc in enumerate(b):
            a[d + i] -= c * bc
        _poly_trim(a)
    return q, a


def _poly_xgcd(a: List[Fraction], b: List[Fraction]
               ) -> Tuple[List[Fraction], List[Fraction], List[Fraction]]:
    """(g, u, v) with u*a + v*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]

    def sub_mul(x, q, y):
        out = list(x) + [Fraction(0)] * max(0, len(q) + len(y) - 1 - len(x))
        for i, qc in enumerate(q):
            if qc == 0:
                continue
            for j, yc in enumerate(y):
                out[i + j] -= qc * yc
        return _poly_trim(out)

    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub_mul(s0, q, s1)
        t0, t1 = t1, sub_mul(t0, q, t1)
    return r0, s0, t0


def _eval_fraction(cs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


class NumberField:
    """Q[t]/(minpoly) with minpoly monic irreducible of degree <= 4."""

    def __init__(self, minpoly: Sequence[Fraction]):
        cs = [Fraction(c) for c in minpoly]
        cs = _poly_trim(list(cs))
        if len(cs) < 2:
            raise ValueError("minimal polynomial must have positive degree")
        if len(cs) > 5:
            raise ValueError("fields of degree greater than 4 not supported")
        lead = cs[-1]
        cs = [c / lead for c in cs]
        t = sympy.Symbol("t")
        expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** i
                   for i, c in enumerate(cs))
        if not sympy.Poly(expr, t).is_irreducible:
            raise ValueError("minimal polynomial must be irreducible over Q")
        self.minpoly: Tuple[Fraction, ...] = tuple(cs)
        self.degree = len(cs) - 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NumberField) and \
            self.minpoly == other.minpoly

    def __hash__(self) -> int:
        return hash(self.minpoly)

    def __repr__(self) -> str:
        return f"NumberField({[str(c) for c in self.minpoly]})"

    def element(self, coeffs: Sequence) -> "NFElement":
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > self.degree:
            _, cs = _poly_divmod(cs, list(self.minpoly))
        cs += [Fraction(0)] * (self.degree - len(cs))
        return NFElement(self, tuple(cs))

    def gen(self) -> "NFElement":
        return self.element([0, 1])

    def zero(self) -> "NFElement":
        return self.element([])

    def one(self) -> "NFElement":
        return self.element([1])

    # -- real embeddings ---------------------------------------------------

    def _sturm_chain(self) -> List[List[Fraction]]:
        p0 = list(self.minpoly)
        p1 = [i * c for i, c in enumerate(p0)][1:]
        chain = [p0, _poly_trim(p1)]
        while chain[-1]:
            _, r = _poly_divmod(chain[-2], chain[-1])
            if not r:
                break
            chain.append([-c for c in r])
        return chain

    def _sign_changes(self, chain: List[List[Fraction]], x: Fraction) -> int:
        signs = []
        for p in chain:
            v = _eval_fraction(p, x)
            if v != 0:
                signs.append(1 if v > 0 else -1)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    def real_roots(self, width: Fraction = Fraction(1, 2 ** 64)
                   ) -> List[Tuple[Fraction, Fraction]]:
        """Disjoint isolating intervals of all real roots, sorted."""
        chain = self._sturm_chain()
        bound = Fraction(1) + max(abs(c) for c in self.minpoly[:-1])
        lo, hi = -bound, bound

        def count(a: Fraction, b: Fraction) -> int:
            return self._sign_changes(chain, a) - self._sign_changes(chain, b)

        out: List[Tuple[Fraction, Fraction]] = []

        def isolate(a: Fraction, b: Fraction, k: int) -> None:
            if k == 0:
                return
            if k == 1 and b - a <= width:
                out.append((a, b))
                return
            m = (a + b) / 2
            # nudge off a root of the minimal polynomial itself
            while _eval_fraction(list(self.minpoly), m) == 0:
                m = (a + m) / 2
            isolate(a, m, count(a, m))
            isolate(m, b, count(m, b))

        isolate(lo, hi, count(lo, hi))
        return sorted(out)

    def embedding(self, index: int = 0,
                  width: Fraction = Fraction(1, 2 ** 64)):
        """Certified iv enclosure of the index-th real root (ascending)."""
        roots = self.real_roots(width)
        if not roots:
            raise ValueError("field has no real embedding")
        a, b = roots[index]
        lo, hi = iv_from_fraction(a), iv_from_fraction(b)
        return iv.mpf([lo.a, hi.b])


class NFElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def _coerce(self, other) -> Optional["NFElement"]:
        if isinstance(other, NFElement):
            if other.field != self.field:
                return None
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([Fraction(other)])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(self.field, tuple(a + b for a, b
                                           in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        deg = self.field.degree
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    prod[i + j] += a * b
        _, rem = _poly_divmod(prod, list(self.field.minpoly))
        rem += [Fraction(0)] * (deg - len(rem))
        return NFElement(self.field, tuple(rem))

    __rmul__ = __mul__

    def inverse(self) -> "NFElement":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero field element")
        g, u, _ = _poly_xgcd(_poly_trim(list(self.coeffs)),
                             list(self.field.minpoly))
        # g is a nonzero constant since the minimal polynomial is irreducible
        c = g[0]
        inv = [x / c for x in u]
        _, rem = _poly_divmod(inv, list(self.field.minpoly))
        rem += [Fraction(0)] * (self.field.degree - len(rem))
        return NFElement(self.field, tuple(rem))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def embed(self, root) -> "iv.mpf":
        """Evaluate at a certified enclosure of a root of the minpoly."""
        acc = iv.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * root + iv_from_fraction(c)
        return acc

    def __repr__(self) -> str:
        return f"NFElement({[str(c) for c in self.coeffs]})"
