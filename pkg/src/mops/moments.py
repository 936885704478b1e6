"""Truncated moments, the p-Hankel moment matrix and tau functions.

Column ``j`` of the moment matrix belongs to weight ``a_j = j % p + 1`` and
moment block ``q_j = j // p`` (weights cycle fastest):

    M[i][j] = rho^{(a_j)}_{i + q_j},   rho^{(a)}_m = sum_{k<=K} k^m w_a(k).

The Euler derivative of weight ``a`` raises every moment of that weight by
one order; since ``eta d/deta eta^k = k eta^k`` termwise, this holds exactly
for the truncated sums, so derivatives of any determinant or factorization
built from M are available exactly by "bumping" columns.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import factorial

from gmpy2 import mpq

from .errors import IndexOutOfRange, TailCertificateExceeded
from .kernel import BandWindow, fmt
from .report import FAIL, PASS, Check, Report, ToleranceBudget
from .series import Jet
from .weights import TruncatedMeasure


@dataclass(frozen=True)
class MomentStore:
    tm: TruncatedMeasure
    p: int
    rho: tuple          # rho[a-1][m]
    m_max: int

    @property
    def K(self):
        return self.tm.K

    @property
    def tail_bound(self):
        return self.tm.tail_bound

    def moment(self, a, m):
        if m > self.m_max:
            raise TailCertificateExceeded(f"moment order {m} > certified m_max={self.m_max}")
        if m < 0:
            raise IndexOutOfRange("negative moment order")
        return self.rho[a - 1][m]

    def entry(self, i, j, bump=0):
        """Moment-matrix entry ``M[i][j]`` with its column raised ``bump`` orders."""
        return self.moment(j % self.p + 1, i + j // self.p + bump)


def build_moments(tm: TruncatedMeasure, m_max: int | None = None) -> MomentStore:
    """Exact truncated moments ``rho[a][m] = sum_{k=0}^{K} k^m w_a(k)``."""
    if m_max is None:
        m_max = tm.m_max
    if m_max > tm.m_max:
        raise TailCertificateExceeded(
            f"requested m_max={m_max} exceeds the certified order {tm.m_max}")
    rho = []
    for w in tm.values:
        sums = [mpq(0)] * (m_max + 1)
        for k, wk in enumerate(w):
            if wk == 0:
                continue
            t = wk
            for m in range(m_max + 1):
                sums[m] += t
                t *= k
                if t == 0:
                    break
        rho.append(tuple(sums))
    return MomentStore(tm, tm.p, tuple(rho), m_max)


# --------------------------------------------------------------------------
# moment matrix windows

@dataclass(frozen=True)
class MomentMatrixWindow:
    n: int
    p: int
    entries: tuple
    ms: MomentStore | None = None
    bumps: tuple = ()

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self):
        return [list(r) for r in self.entries]

    @property
    def window(self) -> BandWindow:
        return BandWindow(self.n, self.n, None, None, self.entries)


def moment_matrix(ms: MomentStore, n: int, rows: int | None = None, bumps=None) -> MomentMatrixWindow:
    """Leading ``n x n`` moment window (``rows`` x n if given), columns optionally bumped."""
    rows = n if rows is None else rows
    bumps = tuple(bumps) if bumps is not None else (0,) * n
    entries = tuple(tuple(ms.entry(i, j, bumps[j]) for j in range(n)) for i in range(rows))
    return MomentMatrixWindow(n, ms.p, entries, ms, bumps)


def hankel_check(mm: MomentMatrixWindow, p: int | None = None) -> Report:
    """``M[i+1][j] == M[i][j+p]`` on the overlap of the window."""
    p = mm.p if p is None else p
    bad = []
    worst = mpq(0)
    for i in range(len(mm.entries) - 1):
        for j in range(mm.n - p):
            r = mm.entries[i + 1][j] - mm.entries[i][j + p]
            if r != 0:
                bad.append((i, j))
                worst = max(worst, abs(r))
    rep = Report("hankel")
    rep.add(Check("p-hankel", worst, ToleranceBudget.exact(), PASS if not bad else FAIL, bad))
    return rep


def theta_shift_column(mm: MomentMatrixWindow, j: int) -> MomentMatrixWindow:
    """Raise column ``j`` by one moment order: the exact Euler derivative of that column."""
    if mm.ms is None:
        raise ValueError("window carries no moment store to bump from")
    if not 0 <= j < mm.n:
        raise IndexOutOfRange(f"column {j} outside window of size {mm.n}")
    bumps = list(mm.bumps) if mm.bumps else [0] * mm.n
    bumps[j] += 1
    return moment_matrix(mm.ms, mm.n, rows=len(mm.entries), bumps=bumps)


# --------------------------------------------------------------------------
# determinants

def det(rows):
    """Exact determinant by fraction-free (Bareiss) elimination with row swaps."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return mpq(1)
    sign = 1
    prev = mpq(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return mpq(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) / prev
            row_i[k] = 0
        prev = akk
    return sign * mpq(a[n - 1][n - 1])


@dataclass(frozen=True)
class TauTable:
    tau: tuple
    tau_assoc: dict
    jets: tuple = ()

    def to_json(self):
        return json.dumps({
            "n": len(self.tau) - 1,
            "tau": [fmt(t) for t in self.tau],
            "jets": [[fmt(x) for x in j] for j in self.jets],
        }, sort_keys=True)


def tau_table(ms: MomentStore, n_max: int, jet_order: int = 0) -> TauTable:
    """``tau[n] = det M^[n]`` for n <= n_max and the associated determinants.

    ``tau_assoc[(n, j)]`` removes row ``n - j`` of ``M^[n]`` and appends row ``n``.
    """
    big = moment_matrix(ms, n_max, rows=n_max + 1) if n_max > 0 else None
    taus = [mpq(1)]
    assoc = {}
    for n in range(1, n_max + 1):
        block = [list(big.entries[i][:n]) for i in range(n)]
        taus.append(det(block))
        extra = list(big.entries[n][:n])
        for j in range(1, n):
            rows = [block[i] for i in range(n) if i != n - j] + [extra]
            assoc[(n, j)] = det(rows)
    jets = tuple(tuple(tau_jet(ms, n, jet_order)) for n in range(n_max + 1)) if jet_order else ()
    return TauTable(tuple(taus), assoc, jets)


def _compositions(r, parts):
    """All ways to write r as an ordered sum of ``parts`` nonnegative integers."""
    if parts == 0:
        if r == 0:
            yield ()
        return
    if parts == 1:
        yield (r,)
        return
    for first in range(r + 1):
        for rest in _compositions(r - first, parts - 1):
            yield (first,) + rest


def tau_jet(ms: MomentStore, n: int, r: int, weights=None) -> list:
    """``(tau_n, d tau_n, ..., d^r tau_n)`` by the multinomial column-bump rule.

    ``d`` is the total Euler derivative, or the sum over ``weights`` only.
    The k-th derivative is ``sum k!/prod(k_j!) det(columns bumped k_j times)``
    over compositions of k restricted to the differentiated columns.
    """
    if n == 0:
        return [mpq(1)] + [mpq(0)] * r
    active = [j for j in range(n) if weights is None or (j % ms.p + 1) in weights]
    out = []
    for k in range(r + 1):
        total = mpq(0)
        for comp in _compositions(k, len(active)):
            bumps = [0] * n
            coef = factorial(k)
            for j, kj in zip(active, comp):
                bumps[j] = kj
                coef //= factorial(kj)
            mm = moment_matrix(ms, n, bumps=bumps)
            total += coef * det(mm.entries)
        out.append(total)
    return out


def jet_moment_matrix(ms: MomentStore, n: int, order: int, weights=None, rows=None):
    """Moment window whose entries are jets in the Euler direction.

    Entry ``(i, j)`` carries ``d^r M[i][j] / r!`` where ``d`` is the total Euler
    derivative, or the derivative in the weights listed in ``weights``.
    """
    rows = n if rows is None else rows
    out = []
    for i in range(rows):
        row = []
        for j in range(n):
            a = j % ms.p + 1
            if weights is None or a in weights:
                row.append(Jet(ms.entry(i, j, r) / factorial(r) for r in range(order + 1)))
            else:
                row.append(Jet.constant(ms.entry(i, j), order))
        out.append(tuple(row))
    return BandWindow(rows, n, None, None, tuple(out))
