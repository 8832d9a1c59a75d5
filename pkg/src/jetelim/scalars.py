"""Scalar backends for exact and certified computation.

Three kinds of scalars flow through the package:

* ``Fraction`` (stdlib) for exact rational arithmetic,
* ``GaussianRational`` for exact arithmetic in Q(i),
* ``ComplexInterval`` for certified rectangular complex interval
  arithmetic built on mpmath's real interval type.

Real certified magnitudes (norms, lengths, absolute values, distances)
are either ``Fraction`` (exact) or ``mpmath.iv.mpf`` intervals.
Comparisons between such magnitudes produce three-valued ``Verdict``
values: an inequality is VERIFIED only when it holds for every value
compatible with the enclosures, REFUTED only when it fails for every
such value, and INDETERMINATE otherwise.  No check in this package ever
claims more than its enclosures support.

Interval precision is a module-level setting (``set_precision``), with
``escalate`` implementing the retry-at-double-precision loop used by
operations that can fail to certify at low precision.
"""

from __future__ import annotations

import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, TypeVar, Union

import mpmath
from mpmath.ctx_iv import MPIntervalContext

__all__ = [
    "DEFAULT_PRECISION_BITS",
    "PRECISION_CAP_BITS",
    "PrecisionError",
    "Verdict",
    "GaussianRational",
    "ComplexInterval",
    "ExactScalar",
    "Scalar",
    "Mag",
    "iv",
    "set_precision",
    "get_precision",
    "precision",
    "escalate",
    "to_complex_interval",
    "iv_from_fraction",
    "iv_abs",
    "iv_log",
    "iv_exp",
    "iv_sqrt",
    "iv_pow",
    "mag_add",
    "mag_mul",
    "mag_max",
    "mag_sum",
    "mag_pow",
    "mag_to_iv",
    "mag_leq",
    "mag_lt",
    "is_exact_scalar",
    "exact_is_zero",
    "scalar_abs2",
    "scalar_abs",
    "scalar_conj",
    "coerce_pair",
    "fmt_iv",
    "fmt_mag",
]

DEFAULT_PRECISION_BITS = 256
PRECISION_CAP_BITS = 4096

# Single interval context for the whole package; precision is mutated in
# place by set_precision.  Endpoints of existing intervals stay valid
# (they are exact binary numbers); only newly computed operations use the
# current precision.
iv: MPIntervalContext = MPIntervalContext()
iv.prec = DEFAULT_PRECISION_BITS


class PrecisionError(Exception):
    """An interval computation could not certify the required fact."""


def set_precision(bits: int) -> None:
    if bits < 8:
        raise ValueError("precision must be at least 8 bits")
    iv.prec = bits


def get_precision() -> int:
    return iv.prec


@contextmanager
def precision(bits: int):
    old = iv.prec
    set_precision(bits)
    try:
        yield
    finally:
        iv.prec = old


T = TypeVar("T")


def escalate(fn: Callable[[], T], *, start: Optional[int] = None,
             cap: int = PRECISION_CAP_BITS) -> T:
    """Run ``fn`` with doubling precision until it stops raising PrecisionError.

    ``fn`` must recompute everything it needs from exact inputs; interval
    values built at a previous (lower) precision stay sound but do not
    become tighter on their own.
    """
    bits = start if start is not None else get_precision()
    while True:
        try:
            with precision(bits):
                return fn()
        except PrecisionError:
            if bits >= cap:
                raise
            bits = min(2 * bits, cap)


class Verdict:
    """Three-valued outcome of a certified check."""

    VERIFIED = "verified"
    INDETERMINATE = "indeterminate"
    REFUTED = "refuted"

    _ORDER = {VERIFIED: 0, INDETERMINATE: 1, REFUTED: 2}

    @staticmethod
    def conj(*verdicts: str) -> str:
        """Conjunction: refuted dominates, then indeterminate."""
        worst = Verdict.VERIFIED
        for v in verdicts:
            if Verdict._ORDER[v] > Verdict._ORDER[worst]:
                worst = v
        return worst

    @staticmethod
    def from_bool(b: bool) -> str:
        return Verdict.VERIFIED if b else Verdict.REFUTED

    @staticmethod
    def exit_code(v: str) -> int:
        return {Verdict.VERIFIED: 0, Verdict.REFUTED: 1,
                Verdict.INDETERMINATE: 2}[v]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


_GAUSS_RE = re.compile(r"^\(([^,]+),([^,]+)\)$")


@dataclass(frozen=True)
class GaussianRational:
    """An element a + b*i of Q(i) with exact rational a, b."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    # -- arithmetic -------------------------------------------------
    def _coerce(self, other) -> Optional["GaussianRational"]:
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(_as_fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

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

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = GaussianRational(Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        # agree with Fraction's hash on real values (mixed-type dict keys)
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- structure --------------------------------------------------
    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_rational(self) -> bool:
        return self.im == 0

    # -- text -------------------------------------------------------
    def __str__(self):
        return f"({self.re},{self.im})"

    @staticmethod
    def parse(text: str) -> "GaussianRational":
        m = _GAUSS_RE.match(text.strip())
        if not m:
            raise ValueError(f"not a Gaussian rational literal: {text!r}")
        return GaussianRational(Fraction(m.group(1).strip()),
                                Fraction(m.group(2).strip()))


ExactScalar = Union[Fraction, GaussianRational]


def iv_from_fraction(q: Union[int, Fraction]):
    """Smallest representable interval containing the exact rational q."""
    if isinstance(q, int):
        return iv.mpf(q)
    return iv.mpf(q.numerator) / q.denominator


class ComplexInterval:
    """Rectangular complex interval: certified enclosure re + im*i."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re if isinstance(re, iv.mpf) else iv_from_fraction(_as_fraction(re))
        self.im = im if isinstance(im, iv.mpf) else iv_from_fraction(_as_fraction(im))

    # -- construction ----------------------------------------------
    @staticmethod
    def from_exact(x: Union[int, Fraction, GaussianRational, "ComplexInterval"]) -> "ComplexInterval":
        if isinstance(x, ComplexInterval):
            return x
        if isinstance(x, GaussianRational):
            return ComplexInterval(iv_from_fraction(x.re), iv_from_fraction(x.im))
        return ComplexInterval(iv_from_fraction(_as_fraction(x)), iv.mpf(0))

    @staticmethod
    def from_mpc(z, radius_ulps: int = 4) -> "ComplexInterval":
        """Enclosure of an mpmath mpc midpoint, padded by a few ulps."""
        eps = mpmath.ldexp(1, -iv.prec + 2) * radius_ulps
        r = abs(z.real) * eps + mpmath.ldexp(1, -iv.prec)
        s = abs(z.imag) * eps + mpmath.ldexp(1, -iv.prec)
        return ComplexInterval(iv.mpf([z.real - r, z.real + r]),
                               iv.mpf([z.imag - s, z.imag + s]))

    # -- arithmetic -------------------------------------------------
    def _coerce(self, other) -> Optional["ComplexInterval"]:
        if isinstance(other, ComplexInterval):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return ComplexInterval.from_exact(other)
        if isinstance(other, iv.mpf):
            return ComplexInterval(other, iv.mpf(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexInterval(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ComplexInterval(self.re * o.re - self.im * o.im,
                               self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "ComplexInterval":
        n = self.abs2()
        if n.a <= 0:
            raise PrecisionError("cannot certify divisor nonzero")
        return ComplexInterval(self.re / n, -self.im / n)

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

    def __neg__(self):
        return ComplexInterval(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ComplexInterval.from_exact(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- queries ----------------------------------------------------
    def conj(self) -> "ComplexInterval":
        return ComplexInterval(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def abs(self):
        return iv.sqrt(self.abs2())

    def exp(self) -> "ComplexInterval":
        r = iv.exp(self.re)
        return ComplexInterval(r * iv.cos(self.im), r * iv.sin(self.im))

    @property
    def contains_zero(self) -> bool:
        return (self.re.a <= 0 <= self.re.b) and (self.im.a <= 0 <= self.im.b)

    @property
    def is_certainly_nonzero(self) -> bool:
        return not self.contains_zero

    def encloses_exact(self, x) -> bool:
        o = ComplexInterval.from_exact(x)
        return (self.re.a <= o.re.a and o.re.b <= self.re.b
                and self.im.a <= o.im.a and o.im.b <= self.im.b)

    def mid(self) -> complex:
        return complex(mpmath.mpf(self.re.mid), mpmath.mpf(self.im.mid))

    def __repr__(self):
        return f"ComplexInterval({fmt_iv(self.re)}, {fmt_iv(self.im)})"


Scalar = Union[Fraction, GaussianRational, ComplexInterval]

# A certified nonnegative magnitude: exact Fraction or real interval.
Mag = Union[Fraction, "iv.mpf"]


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational))


def exact_is_zero(x) -> bool:
    """Exact zero test; intervals are never considered zero."""
    if isinstance(x, (int, Fraction)):
        return x == 0
    if isinstance(x, GaussianRational):
        return x.is_zero
    return False


def scalar_conj(x: Scalar) -> Scalar:
    if isinstance(x, (int, Fraction)):
        return x
    return x.conj()


def scalar_abs2(x: Scalar) -> Mag:
    """|x|^2, exact for exact scalars."""
    if isinstance(x, int):
        return Fraction(x * x)
    if isinstance(x, Fraction):
        return x * x
    return x.abs2()


def scalar_abs(x: Scalar) -> Mag:
    """|x|; exact Fraction for rational x, interval otherwise."""
    if isinstance(x, int):
        return Fraction(abs(x))
    if isinstance(x, Fraction):
        return abs(x)
    if isinstance(x, GaussianRational):
        if x.im == 0:
            return abs(x.re)
        if x.re == 0:
            return abs(x.im)
        return iv.sqrt(iv_from_fraction(x.abs2()))
    return x.abs()


def to_complex_interval(x: Scalar) -> ComplexInterval:
    return ComplexInterval.from_exact(x)


def coerce_pair(a: Scalar, b: Scalar):
    """Bring two scalars into a common arithmetic domain."""
    if isinstance(a, ComplexInterval) or isinstance(b, ComplexInterval):
        return ComplexInterval.from_exact(a), ComplexInterval.from_exact(b)
    if isinstance(a, GaussianRational) or isinstance(b, GaussianRational):
        ga = a if isinstance(a, GaussianRational) else GaussianRational(_as_fraction(a), Fraction(0))
        gb = b if isinstance(b, GaussianRational) else GaussianRational(_as_fraction(b), Fraction(0))
        return ga, gb
    return _as_fraction(a), _as_fraction(b)


# ---------------------------------------------------------------------------
# Real interval helpers (operating on iv.mpf and Fractions)
# ---------------------------------------------------------------------------

def iv_abs(x):
    if isinstance(x, (int, Fraction)):
        return abs(_as_fraction(x))
    return abs(x)


def iv_log(x):
    """Certified natural log of a positive magnitude."""
    y = mag_to_iv(x)
    if y.a <= 0:
        raise PrecisionError("log requires a certifiably positive argument")
    return iv.log(y)


def iv_exp(x):
    return iv.exp(mag_to_iv(x))


def iv_sqrt(x):
    return iv.sqrt(mag_to_iv(x))


def iv_pow(x, n: int):
    """x**n for integer n, staying exact when x is a Fraction."""
    if isinstance(x, (int, Fraction)):
        return _as_fraction(x) ** n
    return x ** n


def mag_to_iv(x: Mag):
    if isinstance(x, (int, Fraction)):
        return iv_from_fraction(x)
    return x


def mag_add(a: Mag, b: Mag) -> Mag:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return _as_fraction(a) + _as_fraction(b)
    return mag_to_iv(a) + mag_to_iv(b)


def mag_mul(a: Mag, b: Mag) -> Mag:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return _as_fraction(a) * _as_fraction(b)
    return mag_to_iv(a) * mag_to_iv(b)


def mag_pow(a: Mag, n: int) -> Mag:
    return iv_pow(a, n)


def mag_max(values: Iterable[Mag]) -> Mag:
    """Maximum of magnitudes; exact when all are exact."""
    vals = list(values)
    if not vals:
        return Fraction(0)
    if all(isinstance(v, (int, Fraction)) for v in vals):
        return max(_as_fraction(v) for v in vals)
    ivs = [mag_to_iv(v) for v in vals]
    lo = max(v.a for v in ivs)
    hi = max(v.b for v in ivs)
    return iv.mpf([lo, hi])


def mag_sum(values: Iterable[Mag]) -> Mag:
    out: Mag = Fraction(0)
    for v in values:
        out = mag_add(out, v)
    return out


def mag_leq(a: Mag, b: Mag) -> str:
    """Three-valued a <= b."""
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Verdict.from_bool(_as_fraction(a) <= _as_fraction(b))
    x, y = mag_to_iv(a), mag_to_iv(b)
    if x.b <= y.a:
        return Verdict.VERIFIED
    if x.a > y.b:
        return Verdict.REFUTED
    return Verdict.INDETERMINATE


def mag_lt(a: Mag, b: Mag) -> str:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Verdict.from_bool(_as_fraction(a) < _as_fraction(b))
    x, y = mag_to_iv(a), mag_to_iv(b)
    if x.b < y.a:
        return Verdict.VERIFIED
    if x.a >= y.b:
        return Verdict.REFUTED
    return Verdict.INDETERMINATE


def fmt_iv(x, digits: int = 17) -> str:
    """Deterministic text form of a real interval or Fraction."""
    if isinstance(x, (int, Fraction)):
        return str(_as_fraction(x))
    return "[%s, %s]" % (mpmath.nstr(mpmath.mpf(x.a), digits),
                         mpmath.nstr(mpmath.mpf(x.b), digits))


def fmt_mag(x: Mag, digits: int = 17) -> str:
    return fmt_iv(x, digits)
