"""Jets along the derivation, series inversion, and jet interpolation.

The jet of order T of a homogeneous P at a group point gamma is the
vector (P(1,gamma), (DP)(1,gamma), ..., (D^{T-1}P)(1,gamma)).  In each
degree L the full jet of order M = binom(L+2,2) determines P: the jet
map is a linear isomorphism, and ``interpolate`` inverts it by an exact
(or certified-interval) linear solve against ``interpolation_matrix``.

``series_inverse`` is the univariate gadget behind the interpolation
length bound: the unique a(X) of degree < e0 with
a(X) * prod_i (1 - r_i X)^{e_i} = 1 mod X^{e0}, whose length satisfies
L(a) <= binom(E-1, e0-1) * R^{e0-1} for E = e0 + sum e_i and
R = max{1, |r_i|}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .group import GroupPoint
from .linalg import kernel_basis, rref, solve
from .polys import Exponent, HomPoly, binom2, binom_int, monomials_of_degree
from .scalars import (
    ComplexInterval,
    PrecisionError,
    Scalar,
    coerce_pair,
    exact_is_zero,
    is_exact_scalar,
)

__all__ = [
    "Jet",
    "jet",
    "jet_dimension",
    "series_inverse",
    "series_inverse_length_cap",
    "interpolation_matrix",
    "interpolate",
    "InterpolationResult",
]


def jet_dimension(L: int) -> int:
    """M = binom(L+2, 2), the dimension of degree-L forms."""
    return binom2(L + 2)


@dataclass
class Jet:
    """Jet data (D^i P)(1, gamma) for 0 <= i < order."""

    point: GroupPoint
    order: int
    values: List[Scalar]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("jet order must be positive")
        if len(self.values) != self.order:
            raise ValueError("jet value count does not match order")

    @property
    def is_exact(self) -> bool:
        return all(is_exact_scalar(v) for v in self.values)

    def is_zero(self) -> bool:
        """Exact vanishing of every value (False for intervals)."""
        return all(exact_is_zero(v) for v in self.values)


def jet(p: HomPoly, gamma: GroupPoint, order: int) -> Jet:
    """The order-T jet of P at gamma: successive derivations, evaluated."""
    values: List[Scalar] = []
    q = p
    for i in range(order):
        values.append(q.eval_affine(gamma))
        if i + 1 < order:
            q = q.derive()
    return Jet(gamma, order, values)


# ---------------------------------------------------------------------------
# Series inverse (the univariate length gadget)
# ---------------------------------------------------------------------------

def series_inverse(roots: Sequence[Scalar], mults: Sequence[int],
                   e0: int) -> List[Scalar]:
    """Coefficients a_0..a_{e0-1} with a(X)*prod (1-r_i X)^{e_i} = 1 mod X^{e0}."""
    if e0 < 1:
        raise ValueError("truncation order must be positive")
    if len(roots) != len(mults):
        raise ValueError("one multiplicity per root")
    if any(e < 1 for e in mults):
        raise ValueError("multiplicities must be positive")
    # product of (1 - r X)^e truncated at X^e0
    prod: List[Scalar] = [Fraction(1)] + [Fraction(0)] * (e0 - 1)
    for r, e in zip(roots, mults):
        for _ in range(e):
            nxt: List[Scalar] = list(prod)
            for k in range(1, e0):
                a, b = coerce_pair(prod[k - 1], r)
                c, d = coerce_pair(nxt[k], a * b)
                nxt[k] = c - d
            prod = nxt
    # power series inverse of prod (constant term 1) truncated at X^e0
    inv: List[Scalar] = [Fraction(1)] + [Fraction(0)] * (e0 - 1)
    for k in range(1, e0):
        acc: Scalar = Fraction(0)
        for j in range(1, k + 1):
            a, b = coerce_pair(prod[j], inv[k - j])
            x, y = coerce_pair(acc, a * b)
            acc = x + y
        z, w = coerce_pair(Fraction(0), acc)
        inv[k] = z - w
    return inv


def series_inverse_length_cap(roots: Sequence[Scalar], mults: Sequence[int],
                              e0: int):
    """The bound binom(E-1, e0-1) * R^{e0-1} on L(a)."""
    from .scalars import mag_max, mag_mul, mag_pow, scalar_abs

    E = e0 + sum(mults)
    R = mag_max([Fraction(1)] + [scalar_abs(r) for r in roots])
    return mag_mul(Fraction(binom_int(E - 1, e0 - 1)), mag_pow(R, e0 - 1))


# ---------------------------------------------------------------------------
# Interpolation
# ---------------------------------------------------------------------------

def interpolation_matrix(L: int, gamma: GroupPoint) -> List[List[Scalar]]:
    """Matrix of Q -> (D^i Q(1,gamma))_{i<M} in the canonical monomial basis.

    Row i, column j holds D^i applied to the j-th degree-L monomial
    (graded-lex), evaluated at (1, gamma).
    """
    M = jet_dimension(L)
    monos = monomials_of_degree(L)
    cols: List[List[Scalar]] = []
    for e in monos:
        p = HomPoly.monomial(e)
        cols.append(jet(p, gamma, M).values)
    return [[cols[j][i] for j in range(M)] for i in range(M)]


@dataclass
class InterpolationResult:
    """A degree-L interpolant plus its certification status."""

    poly: HomPoly
    certified: bool


def interpolate(values: Sequence[Scalar], L: int,
                gamma: GroupPoint) -> InterpolationResult:
    """The unique degree-L form whose order-M jet at gamma equals ``values``.

    Exact gamma: exact solve (certified=True).  Interval gamma: interval
    Gaussian elimination; certified=True only when every pivot is
    certifiably nonzero, else PrecisionError propagates to the caller's
    escalation loop.
    """
    M = jet_dimension(L)
    vals = list(values)
    if len(vals) != M:
        raise ValueError(f"need {M} jet values for degree {L}, got {len(vals)}")
    mat = interpolation_matrix(L, gamma)
    if all(is_exact_scalar(x) for row in mat for x in row) \
            and all(is_exact_scalar(v) for v in vals):
        sol = solve(mat, vals)
        if sol is None:
            raise ArithmeticError("jet map not invertible: this cannot happen")
        return InterpolationResult(HomPoly.from_coeff_vector(L, sol), True)
    sol = _interval_solve(mat, vals)
    return InterpolationResult(HomPoly.from_coeff_vector(L, sol), True)


def _interval_solve(mat: List[List[Scalar]], rhs: List[Scalar]) -> List[Scalar]:
    """Gaussian elimination over complex intervals with certified pivots."""
    n = len(mat)
    a = [[ComplexInterval.from_exact(x) for x in row] + [ComplexInterval.from_exact(r)]
         for row, r in zip(mat, rhs)]
    for k in range(n):
        # choose the pivot with the largest certified lower bound on |.|
        best, best_lo = None, None
        for i in range(k, n):
            m2 = a[i][k].abs2()
            lo = m2.a
            if lo > 0 and (best_lo is None or lo > best_lo):
                best, best_lo = i, lo
        if best is None:
            raise PrecisionError("cannot certify a nonzero pivot in the jet system")
        a[k], a[best] = a[best], a[k]
        inv = a[k][k].inverse()
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k:
                f = a[i][k]
                if f.contains_zero and f.abs2().b == 0:
                    continue
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [a[i][n] for i in range(n)]
