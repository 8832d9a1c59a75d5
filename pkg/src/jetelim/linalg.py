"""Exact dense linear algebra over the scalar fields used in the package.

Matrices are plain lists of lists.  Entries may be Fractions, Gaussian
rationals, or any field-like objects supporting +, -, *, /, unary minus
and == 0 (number-field residues use this).  Everything here is exact;
certified interval linear algebra is not needed because every linear
system in the package is posed over exact data.

Kernel bases over Q (or Q(i)) are normalized to coprime (Gaussian)
integer coordinates with a deterministic sign, so certificates are
reproducible byte for byte.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, List, Optional, Sequence, Tuple

try:  # big-integer arithmetic is much faster through gmpy2 when present
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int

from .scalars import GaussianRational

__all__ = [
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "det_bareiss",
    "det_exact",
    "identity_matrix",
    "mat_mul",
    "mat_vec",
    "primitive_rational_vector",
    "primitive_gaussian_vector",
    "normalize_kernel_vector",
]

Matrix = List[List[object]]
Vector = List[object]


def _is_zero(x) -> bool:
    return x == 0


def identity_matrix(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_vec(a: Matrix, v: Vector) -> Vector:
    out = []
    for row in a:
        s = None
        for x, y in zip(row, v):
            t = x * y
            s = t if s is None else s + t
        out.append(s if s is not None else Fraction(0))
    return out


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return [[sum_prod(row, col) for col in cols] for row in a]


def sum_prod(xs: Sequence, ys: Sequence):
    s = None
    for x, y in zip(xs, ys):
        t = x * y
        s = t if s is None else s + t
    return s if s is not None else Fraction(0)


def rref(rows: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; returns (new matrix, pivot column list)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if not _is_zero(m[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(rows: Matrix) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def kernel_basis(rows: Matrix, ncols: Optional[int] = None,
                 normalize: bool = True) -> List[Vector]:
    """Basis of the right kernel {v : A v = 0}, one vector per free column."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        basis = []
        for j in range(ncols):
            v: Vector = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    n = ncols if ncols is not None else len(rows[0])
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free_cols = [j for j in range(n) if j not in pivot_set]
    basis = []
    for j in free_cols:
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for r_idx, c in enumerate(pivots):
            v[c] = -red[r_idx][j]
        if normalize:
            v = normalize_kernel_vector(v)
        basis.append(v)
    return basis


def solve(rows: Matrix, rhs: Vector) -> Optional[Vector]:
    """One solution of A x = b (free variables set to 0), or None."""
    if not rows:
        return None
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x: Vector = [Fraction(0)] * n
    for r_idx, c in enumerate(pivots):
        x[c] = red[r_idx][n]
    return x


def det_bareiss(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(rows)
    if n == 0:
        return 1
    m = [[_mpz(int(x)) for x in r] for r in rows]
    sign = 1
    prev = _mpz(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = None
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    swap = i
                    break
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (pk * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    return int(sign * m[n - 1][n - 1])


def det_exact(rows: Matrix):
    """Determinant by exact Gaussian elimination (any field entries)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in rows]
    sign = 1
    det = None
    for k in range(n):
        pivot_row = None
        for i in range(k, n):
            if not _is_zero(m[i][k]):
                pivot_row = i
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        pv = m[k][k]
        det = pv if det is None else det * pv
        for i in range(k + 1, n):
            if not _is_zero(m[i][k]):
                f = m[i][k] / pv
                m[i] = [a - f * b for a, b in zip(m[i], m[k])]
    return -det if sign == -1 else det


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def primitive_rational_vector(v: Sequence[Fraction]) -> List[int]:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    fracs = [Fraction(x) for x in v]
    den = 1
    for x in fracs:
        den = _lcm(den, x.denominator)
    ints = [int(x * den) for x in fracs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return ints


def primitive_gaussian_vector(v: Sequence[GaussianRational]) -> List[GaussianRational]:
    """Clear denominators and integer content of a Q(i) vector.

    The leading nonzero entry is rotated by a power of i so that its real
    part is positive (or zero with positive imaginary part), which fixes
    the representative among unit multiples deterministically.
    """
    gs = [x if isinstance(x, GaussianRational)
          else GaussianRational(Fraction(x), Fraction(0)) for x in v]
    den = 1
    for x in gs:
        den = _lcm(den, x.re.denominator)
        den = _lcm(den, x.im.denominator)
    ints = [(int(x.re * den), int(x.im * den)) for x in gs]
    g = 0
    for a, b in ints:
        g = gcd(g, gcd(abs(a), abs(b)))
    if g > 1:
        ints = [(a // g, b // g) for a, b in ints]
    lead = next(((a, b) for a, b in ints if a or b), None)
    if lead is not None:
        a, b = lead
        # multiply by i^k so the lead lands in {re > 0} or {re = 0, im > 0}
        unit = (1, 0)
        for _ in range(3):
            if a > 0 or (a == 0 and b > 0):
                break
            a, b = -b, a
            unit = (-unit[1], unit[0])
        ints = [(x * unit[0] - y * unit[1], x * unit[1] + y * unit[0])
                for x, y in ints]
    return [GaussianRational(Fraction(a), Fraction(b)) for a, b in ints]


def normalize_kernel_vector(v: Vector) -> Vector:
    """Coprime-integer normalization over Q or Q(i); other fields pass through."""
    if all(isinstance(x, (int, Fraction)) for x in v):
        return [Fraction(x) for x in primitive_rational_vector(v)]
    if all(isinstance(x, (int, Fraction, GaussianRational)) for x in v):
        return list(primitive_gaussian_vector(v))
    return v
