"""Macaulay resultants of ternary forms and the multiplicity machinery.

The resultant of three degree-D forms is computed by Macaulay's
quotient-of-determinants at the critical degree nu = 3D - 2: rows of the
big matrix are X^m / X_j^D * P_j for each degree-nu monomial X^m,
assigned to the smallest j with m_j >= D, and

    det(M) = Res(P0, P1, P2) * det(M'),

where M' is the minor indexed by monomials divisible by X_j^D for at
least two j.  On the reference triple (X0^D, X1^D, X2^D) the matrix M is
the identity, which fixes the normalization Res(X0^D,X1^D,X2^D) = +1.
When det(M') happens to vanish (a non-generic accident), the resultant
is recovered by exact interpolation along the pencil toward the
reference triple, on which M' is generically invertible.

On top of the resultant sit the vanishing-order computations (order of
z = 0 as a zero of z -> Res(P + z S)), the direct-sum decomposition of a
top-degree graded piece along a regular sequence, the eigenvector and
gcd lemmas for the derivation, and the multi-point multiplicity
verifier.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .group import GroupPoint
from .ideals import ideal_slice
from .linalg import det_bareiss, det_exact, kernel_basis, rref
from .polys import Exponent, HomPoly, binom2, monomials_of_degree
from .scalars import (
    GaussianRational,
    Scalar,
    Verdict,
    coerce_pair,
    exact_is_zero,
    is_exact_scalar,
)
from .symbridge import hom_divides, hom_factor_list, hom_gcd, is_irreducible

__all__ = [
    "resultant",
    "vanishing_order",
    "TopDegreeDecomposition",
    "decompose_top_degree",
    "is_regular_sequence",
    "MultiPointConfig",
    "multi_ideal_slice",
    "MultiplicityReport",
    "verify_multiplicity",
    "derivation_matrix",
    "eigenstructure_check",
    "irreducible_eigen_check",
    "gcd_order_check",
    "StabilizerProbe",
    "stabilizer_probe",
]


# ---------------------------------------------------------------------------
# Macaulay machinery
# ---------------------------------------------------------------------------

def _macaulay_assignment(nu: int, D: int) -> List[Tuple[Exponent, int]]:
    """Each degree-nu monomial with the smallest j such that m_j >= D."""
    out = []
    for m in monomials_of_degree(nu):
        j = next(i for i in range(3) if m[i] >= D)
        out.append((m, j))
    return out


def _macaulay_rows(triple: Sequence[HomPoly], nu: int) -> Tuple[List[List[Scalar]], List[int]]:
    """The Macaulay matrix (rows in graded-lex monomial order) and the
    column indices of doubly divisible monomials."""
    D = triple[0].degree
    monos = monomials_of_degree(nu)
    col_of = {m: i for i, m in enumerate(monos)}
    rows = []
    for m, j in _macaulay_assignment(nu, D):
        shift = list(m)
        shift[j] -= D
        shifted = triple[j].mul_monomial(tuple(shift))
        row: List[Scalar] = [Fraction(0)] * len(monos)
        for e, v in shifted.coeffs.items():
            row[col_of[e]] = v
        rows.append(row)
    doubly = [i for i, m in enumerate(monos)
              if sum(1 for k in range(3) if m[k] >= D) >= 2]
    return rows, doubly


def _det(rows: List[List[Scalar]]):
    if not rows:
        return Fraction(1)
    if all(isinstance(x, (int, Fraction)) and Fraction(x).denominator == 1
           for r in rows for x in r):
        return Fraction(det_bareiss([[int(x) for x in r] for r in rows]))
    return det_exact(rows)


def _minor(rows: List[List[Scalar]], idx: List[int]) -> List[List[Scalar]]:
    return [[rows[i][j] for j in idx] for i in idx]


def resultant(p0: HomPoly, p1: HomPoly, p2: HomPoly) -> Scalar:
    """Res(P0, P1, P2), exact, normalized so Res(X0^D,X1^D,X2^D) = +1."""
    triple = (p0, p1, p2)
    D = p0.degree
    if not (p1.degree == p2.degree == D):
        raise ValueError("resultant needs three forms of equal degree")
    if D < 1:
        raise ValueError("degree must be positive")
    for p in triple:
        if not p.is_exact:
            raise TypeError("resultant is computed over exact coefficients only")
    nu = 3 * D - 2
    rows, doubly = _macaulay_rows(triple, nu)
    den = _det(_minor(rows, doubly))
    if not exact_is_zero(den):
        num = _det(rows)
        a, b = coerce_pair(num, den)
        return a / b
    return _resultant_by_pencil(triple, nu, doubly)


def _resultant_by_pencil(triple: Sequence[HomPoly], nu: int,
                         doubly: List[int]) -> Scalar:
    """Interpolate Res along (1-t)*P + t*(X_j^D) and read off t = 0.

    Res((1-t)P + t ref) is a polynomial in t of degree <= 3D^2; the
    extraneous minor along this pencil is not identically zero because it
    equals 1 at t = 1.
    """
    D = triple[0].degree
    deg_bound = 3 * D * D
    ref = [HomPoly.monomial((D, 0, 0)), HomPoly.monomial((0, D, 0)),
           HomPoly.monomial((0, 0, D))]
    nodes: List[Scalar] = []
    values: List[Scalar] = []
    t = 1
    while len(nodes) < deg_bound + 1:
        tt = Fraction(t)
        mixed = [p.scale(1 - tt) + r.scale(tt) for p, r in zip(triple, ref)]
        rows, doubly2 = _macaulay_rows(mixed, nu)
        den = _det(_minor(rows, doubly2))
        if not exact_is_zero(den):
            num = _det(rows)
            a, b = coerce_pair(num, den)
            nodes.append(tt)
            values.append(a / b)
        t += 1
        if t > deg_bound + 40:
            raise ArithmeticError("could not collect enough pencil nodes")
    return _lagrange_at_zero(nodes, values)


def _lagrange_at_zero(nodes: List[Scalar], values: List[Scalar]) -> Scalar:
    """Value at 0 of the interpolating polynomial through (nodes, values)."""
    total: Scalar = Fraction(0)
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        w: Scalar = Fraction(1)
        for j, xj in enumerate(nodes):
            if j == i:
                continue
            a, b = coerce_pair(xj, xi)
            w_c, frac = coerce_pair(w, (-a) / (b - a))
            w = w_c * frac
        ws, ys = coerce_pair(w, yi)
        tot, term = coerce_pair(total, ws * ys)
        total = tot + term
    return total


def _lagrange_coeffs(nodes: List[Scalar], values: List[Scalar]) -> List[Scalar]:
    """Full coefficient list (ascending) of the interpolating polynomial."""
    n = len(nodes)
    coeffs: List[Scalar] = [Fraction(0)] * n
    for i in range(n):
        # basis polynomial prod_{j != i} (X - x_j) / (x_i - x_j)
        basis: List[Scalar] = [Fraction(1)]
        denom: Scalar = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            xj = nodes[j]
            nxt: List[Scalar] = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                a, b = coerce_pair(c, xj)
                lo, hi = coerce_pair(nxt[k], a * b)
                nxt[k] = lo - hi
                p, q = coerce_pair(nxt[k + 1], c)
                nxt[k + 1] = p + q
            basis = nxt
            d1, d2 = coerce_pair(denom, nodes[i])
            _, xj2 = coerce_pair(denom, xj)
            denom = d1 * (d2 - xj2)
        for k in range(len(basis)):
            b, d = coerce_pair(basis[k], denom)
            v, scaled = coerce_pair(values[i], b / d)
            c0, c1 = coerce_pair(coeffs[k], v * scaled)
            coeffs[k] = c0 + c1
    return coeffs


def vanishing_order(ps: Sequence[HomPoly], ss: Sequence[HomPoly]) -> Union[int, float]:
    """Order of vanishing at z = 0 of f(z) = Res(P0+zS0, P1+zS1, P2+zS2).

    Exact: f is interpolated as a polynomial of degree <= 3D^2 from
    integer nodes and the first nonzero coefficient is located.  Returns
    math.inf when f is identically zero.
    """
    if len(ps) != 3 or len(ss) != 3:
        raise ValueError("need two triples")
    D = ps[0].degree
    deg_bound = 3 * D * D
    nodes = [Fraction(z) for z in range(deg_bound + 1)]
    values = []
    for z in nodes:
        mixed = [p + s.scale(z) for p, s in zip(ps, ss)]
        values.append(resultant(*mixed))
    coeffs = _lagrange_coeffs(nodes, values)
    for i, c in enumerate(coeffs):
        if not exact_is_zero(c):
            return i
    return math.inf


# ---------------------------------------------------------------------------
# Regular sequences and the top-degree decomposition
# ---------------------------------------------------------------------------

def is_regular_sequence(p0: HomPoly, p1: HomPoly, p2: HomPoly) -> bool:
    """Rank-3 test: P0 != 0, gcd(P0, P1) constant, Res(P0,P1,P2) != 0."""
    if p0.is_zero or p1.is_zero or p2.is_zero:
        return False
    if hom_gcd(p0, p1).degree > 0:
        return False
    return not exact_is_zero(resultant(p0, p1, p2))


@dataclass
class TopDegreeDecomposition:
    """C[X]_nu = E0*P0 (+) E1*P1 (+) E2*P2 along a regular sequence."""

    triple: Tuple[HomPoly, HomPoly, HomPoly]
    nu: int
    bases: Tuple[List[HomPoly], List[HomPoly], List[HomPoly]]

    @property
    def dimensions(self) -> Tuple[int, int, int]:
        return tuple(len(b) for b in self.bases)


def _span_complement_monomials(span_vectors: List[List[Scalar]],
                               degree: int) -> List[Exponent]:
    """Monomials whose classes complement a span inside C[X]_degree."""
    monos = monomials_of_degree(degree)
    if not span_vectors:
        return list(monos)
    red, pivots = rref(span_vectors)
    pivot_set = set(pivots)
    return [m for i, m in enumerate(monos) if i not in pivot_set]


def decompose_top_degree(p0: HomPoly, p1: HomPoly, p2: HomPoly,
                         nu: int) -> TopDegreeDecomposition:
    """Complement subspaces realizing the degree-nu direct sum.

    E_{j+1}(d) is spanned by the monomials outside the row space of
    (P0..Pj) * C[X]_{d-D}; the choice of staircase monomial complements
    makes the construction deterministic.  Requires nu >= 3D - 2.
    """
    triple = (p0, p1, p2)
    D = p0.degree
    if not (p1.degree == p2.degree == D):
        raise ValueError("regular sequence must have equal degrees")
    if nu < 3 * D - 2:
        raise ValueError("nu must be at least 3D - 2")
    if not is_regular_sequence(*triple):
        raise ValueError("input is not certifiably a regular sequence")

    d = nu - D

    def ideal_rows(count: int, deg: int) -> List[List[Scalar]]:
        rows = []
        col_of = {m: i for i, m in enumerate(monomials_of_degree(deg))}
        for j in range(count):
            for m in monomials_of_degree(deg - D):
                shifted = triple[j].mul_monomial(m)
                row: List[Scalar] = [Fraction(0)] * len(col_of)
                for e, v in shifted.coeffs.items():
                    row[col_of[e]] = v
                rows.append(row)
        return rows

    bases: List[List[HomPoly]] = []
    for j in range(3):
        comp = _span_complement_monomials(ideal_rows(j, d), d)
        bases.append([HomPoly.monomial(m) for m in comp])

    dims = [len(b) for b in bases]
    if dims[2] != D * D:
        raise ArithmeticError(f"dim E2 = {dims[2]} instead of D^2 = {D*D}")
    if sum(dims) != binom2(nu + 2):
        raise ArithmeticError("complement dimensions do not fill degree nu")

    # exact direct-sum verification: the concatenated multiplication map
    # must have full rank
    col_of = {m: i for i, m in enumerate(monomials_of_degree(nu))}
    big: List[List[Scalar]] = []
    for j, basis in enumerate(bases):
        for b in basis:
            prod = b * triple[j]
            row: List[Scalar] = [Fraction(0)] * len(col_of)
            for e, v in prod.coeffs.items():
                row[col_of[e]] = v
            big.append(row)
    _, pivots = rref(big)
    if len(pivots) != binom2(nu + 2):
        raise ArithmeticError("complement bases do not realize a direct sum")
    return TopDegreeDecomposition(triple, nu, tuple(bases))


# ---------------------------------------------------------------------------
# Multi-point multiplicity (single point and sumset configurations)
# ---------------------------------------------------------------------------

def phi_determinant(dec: TopDegreeDecomposition,
                    triple: Sequence[HomPoly]) -> Scalar:
    """det of (A0,A1,A2) -> A0 Q0 + A1 Q1 + A2 Q2 on E0 x E1 x E2.

    Multihomogeneous of degree dim E_j in the coefficients of Q_j; since
    dim E2 = D^2 equals the resultant's degree in its last argument, the
    quotient phi/Res depends only on (Q0, Q1).  This gives an independent
    consistency route for the resultant's Q2-dependence.
    """
    nu = dec.nu
    monos = monomials_of_degree(nu)
    col_of = {m: i for i, m in enumerate(monos)}
    rows: List[List[Scalar]] = []
    for j, basis in enumerate(dec.bases):
        for b in basis:
            prod = b * triple[j]
            row: List[Scalar] = [Fraction(0)] * len(monos)
            for e, v in prod.coeffs.items():
                row[col_of[e]] = v
            rows.append(row)
    return _det(rows)


@dataclass
class MultiPointConfig:
    """A finite point set with jet order, plus an optional witness pair."""

    points: List[GroupPoint]
    order: int
    witness_points: Optional[List[GroupPoint]] = None
    witness_order: Optional[int] = None

    def condition_holds(self, D: int) -> bool:
        """The degree condition gating the multi-point multiplicity bound.

        Single point: T <= binom(D+1, 2).  Several points: the witness
        data must satisfy D < (T1+1)*min(|pi1|, |pi2|) and
        (T+T1)*|sumset| < binom(D+2, 2).
        """
        if len(self.points) == 1 and self.witness_points is None:
            return self.order <= binom2(D + 1)
        if self.witness_points is None or self.witness_order is None:
            return False
        pi1 = {g.xi for g in self.witness_points}
        pi2 = {g.eta for g in self.witness_points}
        bound = (self.witness_order + 1) * min(len(pi1), len(pi2))
        if not D < bound:
            return False
        sumset = {g + h for g in self.points for h in self.witness_points}
        return (self.order + self.witness_order) * len(sumset) < binom2(D + 2)

    def expected_order(self) -> int:
        return self.order * len(self.points)


def multi_ideal_slice(points: Sequence[GroupPoint], T: int, D: int) -> List[HomPoly]:
    """Basis of the degree-D part of the intersection of jet ideals."""
    monos = monomials_of_degree(D)
    rows = []
    for g in points:
        for i in range(T):
            row = []
            for e in monos:
                row.append(HomPoly.monomial(e).derive_iter(i).eval_affine(g))
            rows.append(row)
    vecs = kernel_basis(rows, ncols=len(monos))
    return [HomPoly.from_coeff_vector(D, v) for v in vecs]


@dataclass
class MultiplicityReport:
    config: MultiPointConfig
    degree: int
    orders: List[Union[int, float]]
    expected: int

    @property
    def min_order(self) -> Union[int, float]:
        return min(self.orders) if self.orders else math.inf

    @property
    def verdict(self) -> str:
        return Verdict.from_bool(self.min_order >= self.expected)

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "point_count": len(self.config.points),
            "order": self.config.order,
            "expected_min_order": self.expected,
            "orders": ["inf" if o == math.inf else o for o in self.orders],
            "min_order": "inf" if self.min_order == math.inf else self.min_order,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def verify_multiplicity(config: MultiPointConfig, D: int, trials: int,
                        seed: int = 0) -> MultiplicityReport:
    """Sample triples from the joint slice; check Res vanishing orders.

    Each trial draws a random small-integer triple from the slice basis
    and a random integer perturbation triple, then computes the exact
    order of z = 0 in Res(P + z S).
    """
    if not config.condition_holds(D):
        raise ValueError("configuration does not satisfy the degree condition")
    basis = multi_ideal_slice(config.points, config.order, D)
    if not basis:
        raise ValueError("empty ideal slice: no triples to sample")
    rng = random.Random(seed)
    monos = monomials_of_degree(D)
    orders: List[Union[int, float]] = []
    for _ in range(trials):
        ps = []
        while len(ps) < 3:
            p = HomPoly.zero(D)
            for b in basis:
                w = rng.randint(-2, 2)
                if w:
                    p = p + b.scale(Fraction(w))
            if not p.is_zero:
                ps.append(p)
        ss = []
        for _ in range(3):
            s = HomPoly(D, {m: Fraction(rng.randint(-3, 3)) for m in monos})
            ss.append(s)
        orders.append(vanishing_order(ps, ss))
    return MultiplicityReport(config, D, orders, config.expected_order())


# ---------------------------------------------------------------------------
# The derivation's eigenstructure and divisibility lemmas
# ---------------------------------------------------------------------------

def derivation_matrix(D: int) -> List[List[Scalar]]:
    """Matrix of the derivation on degree-D forms (graded-lex basis)."""
    monos = monomials_of_degree(D)
    col_of = {m: i for i, m in enumerate(monos)}
    n = len(monos)
    mat: List[List[Scalar]] = [[Fraction(0)] * n for _ in range(n)]
    for j, m in enumerate(monos):
        dm = HomPoly.monomial(m).derive()
        for e, v in dm.coeffs.items():
            mat[col_of[e]][j] = v
    return mat


def eigenstructure_check(D: int) -> str:
    """The derivation on degree D has eigenvalues 0..D with eigenspace k
    spanned by X2^k X0^{D-k}; checked by exact kernel computations."""
    from .linalg import identity_matrix, mat_mul

    mat = derivation_matrix(D)
    monos = monomials_of_degree(D)
    n = len(monos)
    for k in range(D + 1):
        shifted = [[mat[i][j] - Fraction(int(i == j)) * k for j in range(n)]
                   for i in range(n)]
        kern = kernel_basis(shifted, ncols=n)
        if len(kern) != 1:
            return Verdict.REFUTED
        expected = [Fraction(0)] * n
        expected[monos.index((D - k, 0, k))] = Fraction(1)
        if kern[0] != expected:
            return Verdict.REFUTED
    # the product prod (D - k)^(D-k+1) annihilates the degree-D piece
    prod = identity_matrix(n)
    for k in range(D + 1):
        shifted = [[mat[i][j] - Fraction(int(i == j)) * k for j in range(n)]
                   for i in range(n)]
        for _ in range(D - k + 1):
            prod = mat_mul(shifted, prod)
    if any(x != 0 for row in prod for x in row):
        return Verdict.REFUTED
    return Verdict.VERIFIED


def irreducible_eigen_check(r: HomPoly) -> bool:
    """Whether R | derive(R), for irreducible R; must hold iff R is a
    constant multiple of X0 or of X2."""
    if not is_irreducible(r):
        raise ValueError("input must be irreducible")
    return hom_divides(r, r.derive())


def gcd_order_check(p: HomPoly, k: int) -> str:
    """Multiplicity claim: an irreducible R dividing P, DP, .., D^kP has
    multiplicity >= k+1 in P; requires X0 and X2 not dividing P.

    Also checks the consequence gcd(P, DP, ..., D^DP) = 1.
    """
    if p.is_zero:
        raise ValueError("input must be nonzero")
    for var in ((1, 0, 0), (0, 0, 1)):
        if hom_divides(HomPoly.monomial(var), p):
            raise ValueError("input must not be divisible by X0 or X2")
    derivs = [p]
    for _ in range(max(k, p.degree)):
        derivs.append(derivs[-1].derive())
    for r, mult in hom_factor_list(p):
        if r.degree == 0:
            continue
        chain = 0
        while chain + 1 <= k and chain + 1 < len(derivs) \
                and hom_divides(r, derivs[chain + 1]):
            chain += 1
        # R divides P, DP, ..., D^chain P; the lemma demands mult >= chain+1
        if mult < chain + 1:
            return Verdict.REFUTED
    g = p
    for i in range(1, p.degree + 1):
        g = hom_gcd(g, derivs[i])
    if g.degree != 0:
        return Verdict.REFUTED
    return Verdict.VERIFIED


@dataclass
class StabilizerProbe:
    polynomial: HomPoly
    stabilizers: List[Tuple[GroupPoint, bool]]
    verdict: str


def stabilizer_probe(r: HomPoly, samples: Sequence[GroupPoint]) -> StabilizerProbe:
    """Probe the stabilizer dichotomy of an irreducible R (not X0, X2).

    For each sample gamma, decide R | tau_gamma(R) exactly.  The sampled
    stabilizers must be consistent with: either no stabilizer moves the
    first coordinate, or every stabilizing eta is a root of unity of
    order at most deg R.
    """
    if not is_irreducible(r):
        raise ValueError("input must be irreducible")
    for var in ((1, 0, 0), (0, 0, 1)):
        if hom_divides(HomPoly.monomial(var), r):
            raise ValueError("input must not be a multiple of X0 or X2")
    results: List[Tuple[GroupPoint, bool]] = []
    for g in samples:
        results.append((g, hom_divides(r, r.translate(g))))
    stab = [g for g, ok in results if ok]
    pi1_moves = any(not exact_is_zero(g.xi) for g in stab)
    if not pi1_moves:
        return StabilizerProbe(r, results, Verdict.VERIFIED)
    d = r.degree
    for g in stab:
        if not _is_root_of_unity(g.eta, d):
            return StabilizerProbe(r, results, Verdict.REFUTED)
    return StabilizerProbe(r, results, Verdict.VERIFIED)


def _is_root_of_unity(eta: Scalar, max_order: int) -> bool:
    if not is_exact_scalar(eta):
        return False
    power = eta
    for _ in range(max_order):
        a, b = coerce_pair(power, Fraction(1))
        if a == b:
            return True
        p, q = coerce_pair(power, eta)
        power = p * q
    return False
