"""Integer lattice reduction for the small-jet searches.

Two implementations live here.  ``exact_lll`` is the textbook algorithm
over exact rationals; it is slow and exists as an oracle for tests and
for cross-checking small instances.  ``lll`` keeps the basis exact but
tracks Gram-Schmidt data in floating point against a shared power-of-two
scale, refreshing whenever the floats degrade; this is what the searches
use.  ``reduce_jet_lattice`` adds the staging used for large jet
columns: the jet block enters in slices of its full magnitude, high
bits first, and every stage starts from the integer transform found by
the previous one, so no single pass has to absorb a dynamic range that
floating point cannot represent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

try:
    from gmpy2 import fma, mpz
except ImportError:  # pragma: no cover - gmpy2 is present in normal installs
    mpz = int

    def fma(a, b, c):
        return a * b + c

__all__ = [
    "LLLStats",
    "lll",
    "exact_lll",
    "is_lll_reduced",
    "same_lattice_transform",
    "reduce_jet_lattice",
]


@dataclass
class LLLStats:
    swaps: int
    visits: int
    reached_target: bool = False


# ---------------------------------------------------------------------------
# float-assisted reduction
# ---------------------------------------------------------------------------

_HEAD = 220  # bits of dynamic range kept in the float mirror


def _round_to_int(c: float) -> int:
    """Nearest integer to a finite float that may exceed 2^53."""
    m, e = math.frexp(c)
    if e <= 53:
        return round(c)
    return round(m * (1 << 53)) << (e - 53)


_MU_LIMIT = 1e18  # size-reduction coefficients beyond this mean the
                  # mirror lost track; refresh before trusting them

_PACK_HEADROOM = 128  # limb slack over the packing-time column size
_GUARD_MARGIN = 80    # repack once an entry gets this close to a limb
_CHUNK = 32           # unpack chunk size; uint32 casts to float exactly


class _Packing:
    """Rows stored as single integers, one fixed-width limb per column.

    Each limb holds entry + 2^(L-1), so limbs are nonnegative and a row
    combination acts on the packed value as a whole: B[k] - t*B[j] is
    two fused multiply-adds instead of a Python loop over columns.  The
    offsets of all columns sum to ``hones``, which restores the
    invariant after a combination.  One width serves every column; the
    caller repacks with a wider limb when entries approach the guard
    exponent, long before neighbouring limbs could collide.
    """

    def __init__(self, ncols: int, max_entry_bits: int):
        L = 64 * ((max_entry_bits + _PACK_HEADROOM) // 64 + 1)
        self.ncols = ncols
        self.limb = L
        self.nbytes = ncols * L // 8
        ones = 0
        for i in range(ncols):
            ones |= 1 << (L * i)
        self.hones = mpz(ones << (L - 1))
        self.guard_exp = L - _GUARD_MARGIN

    def pack_row(self, row) -> "mpz":
        L = self.limb
        half = 1 << (L - 1)
        lb = L // 8
        parts = [int(x + half).to_bytes(lb, "little") for x in row]
        return mpz(int.from_bytes(b"".join(parts), "little"))

    def unpack_row(self, p) -> list:
        L = self.limb
        half = 1 << (L - 1)
        lb = L // 8
        raw = int(p).to_bytes(self.nbytes, "little")
        return [int.from_bytes(raw[o:o + lb], "little") - half
                for o in range(0, self.nbytes, lb)]

    def unpack_floats(self, p, q: int) -> np.ndarray:
        """Float image of a packed row, scaled down by 2^q.

        Chunks of 32 bits convert to float exactly, and the chunks are
        summed highest first, so limb-offset cancellation happens
        between exact values and the result carries full float
        precision relative to each entry.  An unordered summation would
        leave errors at the scale of the offsets instead.
        """
        L = self.limb
        if L >= 960:  # entries can pass the float range: go one by one
            out = np.empty(self.ncols)
            half = 1 << (L - 1)
            mask = (1 << L) - 1
            base = int(p)
            for i in range(self.ncols):
                e = ((base >> (L * i)) & mask) - half
                bl = e.bit_length()
                if bl <= 53:
                    out[i] = math.ldexp(float(e), -q)
                else:
                    s = bl - 53
                    out[i] = math.ldexp(float(e >> s), s - q)
            return out
        words = L // _CHUNK
        chunks = np.frombuffer(int(p).to_bytes(self.nbytes, "little"),
                               dtype=np.uint32).astype(np.float64)
        chunks = chunks.reshape(self.ncols, words)
        acc = chunks[:, -1] - 2147483648.0
        for w in range(words - 2, -1, -1):
            acc *= 4294967296.0
            acc += chunks[:, w]
        if q:
            acc *= math.ldexp(1.0, -q)
        return acc

    def combine(self, pk, pj, t):
        """Packed value of row_k - t * row_j."""
        if t == 1:
            return (pk + self.hones) - pj
        if t == -1:
            return (pk - self.hones) + pj
        tz = mpz(t)
        return fma(tz, self.hones, fma(-tz, pj, pk))


def _max_bits(rows) -> int:
    return max(max((abs(x).bit_length() for x in row), default=1)
               for row in rows)


def _row_bits(row) -> int:
    return max((abs(x).bit_length() for x in row), default=0)


def lll(rows: List[List[int]], delta: float = 0.99, *,
        max_visits: int = 50_000_000,
        target_bits: Optional[int] = None,
        soft_target: Optional[int] = None) -> LLLStats:
    """Reduce an integer basis in place (rows = basis vectors).

    delta is the Lovasz parameter of the final pass; earlier passes run
    at looser values to cut the swap count.  When target_bits is given,
    reduction stops as soon as some row has all entries below
    2^target_bits in absolute value; the scan happens on a fixed visit
    schedule so runs are reproducible.  soft_target is a looser stop
    bound applied only during the last (full-delta) pass, where finding
    such a row means further polishing has diminishing returns.
    """
    for i, row in enumerate(rows):
        rows[i] = [mpz(x) for x in row]
    total = LLLStats(0, 0)
    schedule = [d for d in (0.75, 0.9) if d < delta] + [delta]
    for pos, d in enumerate(schedule):
        tb = target_bits
        if soft_target is not None and pos == len(schedule) - 1:
            tb = soft_target if tb is None else max(tb, soft_target)
        st = _lll_pass(rows, d, max_visits, tb)
        total.swaps += st.swaps
        total.visits += st.visits
        if st.reached_target:
            total.reached_target = True
            break
    for i, row in enumerate(rows):
        rows[i] = [int(x) for x in row]
    return total


def _lll_pass(B, delta: float, max_visits: int,
              target_bits: Optional[int]) -> LLLStats:
    n = len(B)
    if n <= 1:
        return LLLStats(0, 0)
    packing = _Packing(len(B[0]), _max_bits(B))
    P = [packing.pack_row(r) for r in B]
    q = max(0, _max_bits(B) - _HEAD)
    F = np.array([packing.unpack_floats(p, q) for p in P])
    Qs = np.zeros_like(F)
    Bn = np.zeros(n)
    mu = np.eye(n)
    # float screen for the early exit: exact confirmation happens only
    # when a row dips below the scaled threshold
    thr = math.ldexp(1.0, target_bits - q + 1) if target_bits is not None \
        else None

    def hit(k: int) -> bool:
        if thr is None:
            return False
        row = np.abs(F[k])
        if row.size and row.max() >= thr:
            return False
        return _row_bits(packing.unpack_row(P[k])) <= target_bits

    def gs_row(k: int) -> None:
        v = F[k].copy()
        if k:
            den = np.maximum(Bn[:k], 1e-300)
            c = Qs[:k] @ v / den
            mu[k, :k] = c
            v -= c @ Qs[:k]
        Qs[k] = v
        Bn[k] = v @ v

    def gs_mu(k: int) -> float:
        """Refresh mu[k, :k] only; the worst coefficient comes back.

        The projection Qs[k] is left stale on purpose: reduction rounds
        only consume the mu row, and gs_row runs once when the row has
        settled.  A NaN anywhere surfaces as a NaN return.
        """
        if not k:
            return 0.0
        c = Qs[:k] @ F[k] / np.maximum(Bn[:k], 1e-300)
        mu[k, :k] = c
        return float(np.abs(c).max())

    def full_refresh(upto: int) -> None:
        nonlocal q, F, thr
        m = float(np.abs(F).max())
        if math.isfinite(m) and m > 0.0:
            q = max(0, math.frexp(m)[1] + q - _HEAD)
        if target_bits is not None:
            thr = math.ldexp(1.0, target_bits - q + 1)
        F = np.array([packing.unpack_floats(p, q) for p in P])
        for j in range(upto + 1):
            gs_row(j)

    def repack(upto: int) -> None:
        # some entry outgrew its limb headroom: rebuild with the width
        # the entries need now
        nonlocal packing, P
        rows = [packing.unpack_row(p) for p in P]
        packing = _Packing(packing.ncols, _max_bits(rows))
        P = [packing.pack_row(r) for r in rows]
        full_refresh(upto)

    def size_reduce(k: int) -> None:
        refreshed = False
        for _ in range(60):
            worst = gs_mu(k)
            if not worst <= 0.5:  # worst may be NaN; NaN falls through
                if not worst < _MU_LIMIT:
                    # the mirror lost track of this row; refresh once,
                    # then let the Lovasz step decide with what we have
                    if refreshed:
                        break
                    full_refresh(k)
                    refreshed = True
                    continue
                # candidates from a snapshot; entries pushed above 1/2
                # by a later update get the next round's rescan
                murow = mu[k]
                js = np.nonzero(np.abs(murow[:k]) > 0.5)[0].tolist()
                did = False
                before = float(np.abs(F[k]).max())
                for j in reversed(js):
                    c = float(murow[j])
                    if -0.5 <= c <= 0.5:
                        continue
                    if -4503599627370496.0 < c < 4503599627370496.0:
                        t = int(c + 0.5) if c > 0.0 else int(c - 0.5)
                    else:
                        t = _round_to_int(c)
                    P[k] = packing.combine(P[k], P[j], t)
                    murow[:j + 1] -= float(t) * mu[j, :j + 1]
                    did = True
                if did:
                    # reconvert from the exact row: reductions cancel
                    # far below what an incrementally updated float
                    # image can resolve
                    F[k] = packing.unpack_floats(P[k], q)
                    fm = float(np.abs(F[k]).max())
                    if not math.isfinite(fm) or \
                            (fm > 0.0 and
                             math.frexp(fm)[1] + q >= packing.guard_exp):
                        repack(k)
                        refreshed = True
                        continue
                    # a sound reduction round cannot blow the row up;
                    # growth means the coefficients came from a
                    # degenerate float window
                    if fm > 1e6 * max(before, 1.0):
                        if refreshed:
                            break
                        full_refresh(k)
                        refreshed = True
                    continue
            break
        gs_row(k)

    gs_row(0)
    k = 1
    st = LLLStats(0, 0)
    with np.errstate(all="ignore"):
        while k < n:
            st.visits += 1
            if st.visits > max_visits:
                break
            size_reduce(k)
            if hit(k):
                st.reached_target = True
                break
            if Bn[k] >= (delta - mu[k, k - 1] ** 2) * Bn[k - 1]:
                k += 1
            else:
                P[k], P[k - 1] = P[k - 1], P[k]
                F[[k, k - 1]] = F[[k - 1, k]]
                gs_row(k - 1)
                st.swaps += 1
                if hit(k - 1):
                    st.reached_target = True
                    break
                k = max(k - 1, 1)
    for i in range(n):
        B[i] = [mpz(x) for x in packing.unpack_row(P[i])]
    if not st.reached_target and target_bits is not None and \
            any(_row_bits(r) <= target_bits for r in B):
        st.reached_target = True
    return st


# ---------------------------------------------------------------------------
# staged reduction for jet lattices
# ---------------------------------------------------------------------------

def reduce_jet_lattice(jet_cols: Sequence[Sequence[int]], *,
                       stage_step: int = 64, delta: float = 0.99,
                       target_bits: Optional[int] = None,
                       ) -> Tuple[List[List[int]], LLLStats]:
    """Reduce the lattice spanned by the rows (e_i | jets_i).

    jet_cols holds, per basis monomial, the jet values already scaled to
    integers.  Each jet column enters in slices of stage_step bits, high
    bits first and relative to its own magnitude: stage s reduces the
    view [U | (U*jets_t) >> max(0, colbits_t - s)] where U is the
    integer transform accumulated so far.  Per-column pacing keeps the
    cancellation any single pass must find within what the float mirror
    can resolve.  The truncated views only steer the search; the final
    stage runs on the exact rows, so the returned basis spans the true
    lattice.

    Returns the reduced rows [coeffs | jets] and accumulated statistics.
    """
    n = len(jet_cols)
    m = len(jet_cols[0]) if n else 0
    jints = [[mpz(x) for x in row] for row in jet_cols]
    colbits = [max((abs(jints[i][t]).bit_length() for i in range(n)),
                   default=0) for t in range(m)]
    full = max(colbits, default=0)
    U: List[List[int]] = [[mpz(int(i == j)) for j in range(n)]
                          for i in range(n)]
    stats = LLLStats(0, 0)
    stages = list(range(min(stage_step, full), full, stage_step)) + [full]
    rows: List[List[int]] = [list(u) for u in U]
    for s in stages:
        shifts = [max(0, cb - s) for cb in colbits]
        rows = []
        for i in range(n):
            ui = U[i]
            jets = [sum(ui[k] * jints[k][t] for k in range(n) if ui[k])
                    >> shifts[t] for t in range(m)]
            rows.append(list(ui) + jets)
        final = s == full
        st = lll(rows, delta if final else 0.75,
                 target_bits=target_bits if final else None)
        stats.swaps += st.swaps
        stats.visits += st.visits
        stats.reached_target = st.reached_target
        U = [[mpz(x) for x in row[:n]] for row in rows]
    return [[int(x) for x in row] for row in rows], stats


# ---------------------------------------------------------------------------
# exact rational implementation (test oracle)
# ---------------------------------------------------------------------------

def exact_lll(rows: List[List[int]],
              delta: Fraction = Fraction(3, 4)) -> None:
    """Textbook LLL over exact rationals, in place.  Small inputs only."""
    n = len(rows)
    if n <= 1:
        return
    delta = Fraction(delta)

    def gram() -> Tuple[List[List[Fraction]], List[Fraction]]:
        star: List[List[Fraction]] = []
        norms: List[Fraction] = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in rows[i]]
            for j in range(i):
                if norms[j] == 0:
                    raise ValueError("input rows are linearly dependent")
                m = sum(Fraction(a) * b for a, b in zip(rows[i], star[j]))
                m /= norms[j]
                mu[i][j] = m
                v = [a - m * b for a, b in zip(v, star[j])]
            star.append(v)
            norms.append(sum(a * a for a in v))
        return mu, norms

    mu, norms = gram()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                t = round(mu[k][j])
                rows[k] = [a - t * b for a, b in zip(rows[k], rows[j])]
                mu, norms = gram()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            rows[k], rows[k - 1] = rows[k - 1], rows[k]
            mu, norms = gram()
            k = max(k - 1, 1)


def is_lll_reduced(rows: Sequence[Sequence[int]],
                   delta: Fraction = Fraction(3, 4)) -> bool:
    """Exact check of size reduction plus the Lovasz condition."""
    n = len(rows)
    delta = Fraction(delta)
    star: List[List[Fraction]] = []
    norms: List[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = [Fraction(x) for x in rows[i]]
        for j in range(i):
            if norms[j] == 0:
                return False
            m = sum(Fraction(a) * b for a, b in zip(rows[i], star[j]))
            m /= norms[j]
            mu[i][j] = m
            v = [a - m * b for a, b in zip(v, star[j])]
        star.append(v)
        norms.append(sum(a * a for a in v))
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


def same_lattice_transform(
        original: Sequence[Sequence[int]],
        reduced: Sequence[Sequence[int]]) -> Optional[List[List[int]]]:
    """Integer unimodular T with reduced = T * original, if one exists."""
    from .linalg import det_bareiss, solve

    n = len(original)
    cols = len(original[0])
    trans: List[List[int]] = []
    rows_f = [[Fraction(x) for x in row] for row in original]
    # solve row-wise: reduced_i = sum_j t_ij original_j
    at = [[rows_f[j][c] for j in range(n)] for c in range(cols)]
    for r in reduced:
        sol = solve(at, [Fraction(x) for x in r])
        if sol is None:
            return None
        t_row = []
        for x in sol:
            if x.denominator != 1:
                return None
            t_row.append(int(x))
        trans.append(t_row)
    if abs(det_bareiss(trans)) != 1:
        return None
    return trans
