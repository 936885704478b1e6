"""Scalars, tolerance budgets and finite windows of semi-infinite matrices.

Every matrix in the library is a leading ``rows x cols`` window of a
semi-infinite matrix together with its declared bandwidths. A bandwidth of
``None`` means "unbounded" (e.g. a full lower-triangular matrix has
``sup=0, sub=None``). The declared bandwidths are what make products of
windows trustworthy: an entry of ``A @ B`` computed from finite windows is
exact only when the neglected terms of the infinite inner sum are
structurally zero, and :func:`band_mul` crops the result to that region.
"""
from __future__ import annotations

import contextlib
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpq

from .errors import ShapeMismatch, StructuralZeroViolation, WindowTooSmall

DEFAULT_AMPLIFICATION = mpq(2) ** 20


# --------------------------------------------------------------------------
# scalars

def Q(x) -> mpq:
    """Coerce ints, Fractions, mpq and ``"num/den"`` strings to an exact rational."""
    if isinstance(x, type(mpq())):
        return x
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational literal")
        if any(ch in s for ch in ".eE") and "/" not in s:
            # decimal literals are exact too: "1e-40" -> 1/10^40
            return mpq(Fraction(s))
        return mpq(Fraction(s))
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact parameters; pass 'num/den' strings")
    return mpq(x)


def fmt(x) -> str:
    """Render an exact rational as ``"num/den"`` (or ``"num"`` for integers)."""
    q = Q(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_float(x) -> float:
    return float(x)


class ExactRational:
    """Default backend: unbounded exact rationals (gmpy2 ``mpq``)."""

    name = "exact"

    def coerce(self, x):
        return Q(x)

    @contextlib.contextmanager
    def context(self):
        yield self

    def __repr__(self):
        return "ExactRational()"


class BigFloat:
    """Configurable-precision binary floats (gmpy2 ``mpfr``).

    Only meant for performance experiments; exact-tier checks never run on it.
    Arithmetic must happen inside :meth:`context` so that no operation falls
    back to the ambient (lower) precision.
    """

    name = "bigfloat"

    def __init__(self, precision_bits: int):
        if precision_bits <= 0:
            raise ValueError("precision_bits must be positive")
        self.precision_bits = int(precision_bits)

    def coerce(self, x):
        with gmpy2.local_context(gmpy2.context(), precision=self.precision_bits):
            return gmpy2.mpfr(Q(x) if not isinstance(x, type(gmpy2.mpfr())) else x)

    @contextlib.contextmanager
    def context(self):
        with gmpy2.local_context(gmpy2.context(), precision=self.precision_bits):
            yield self

    def __repr__(self):
        return f"BigFloat({self.precision_bits})"


EXACT = ExactRational()


# --------------------------------------------------------------------------
# tolerance

@dataclass(frozen=True)
class ToleranceBudget:
    """Exact mode demands equality; tail mode accepts ``|r| <= bound * amplification``."""

    mode: str = "exact"
    bound: mpq = mpq(0)
    amplification: mpq = DEFAULT_AMPLIFICATION

    def __post_init__(self):
        if self.mode not in ("exact", "tail"):
            raise ValueError(f"unknown tolerance mode {self.mode!r}")

    @classmethod
    def exact(cls):
        return cls("exact")

    @classmethod
    def tail(cls, bound, amplification=DEFAULT_AMPLIFICATION):
        return cls("tail", Q(bound), Q(amplification))

    @property
    def limit(self) -> mpq:
        if self.mode == "exact":
            return mpq(0)
        return self.bound * self.amplification

    def accepts(self, residual) -> bool:
        if self.mode == "exact":
            return residual == 0
        return abs(residual) <= self.limit


# --------------------------------------------------------------------------
# windows

@dataclass(frozen=True, eq=False)
class DenseWindow:
    rows: int
    cols: int
    entries: tuple

    @classmethod
    def from_rows(cls, rows):
        entries = tuple(tuple(r) for r in rows)
        ncols = len(entries[0]) if entries else 0
        if any(len(r) != ncols for r in entries):
            raise ShapeMismatch("ragged rows")
        return cls(len(entries), ncols, entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self):
        return [list(r) for r in self.entries]


@dataclass(frozen=True, eq=False)
class BandWindow:
    """Leading window of a semi-infinite matrix with declared bandwidths.

    ``sub``/``sup`` count the possibly-nonzero sub/superdiagonals of the
    *semi-infinite* matrix; ``None`` means unbounded. Construction rejects a
    window with a nonzero entry outside the declared band.
    """

    rows: int
    cols: int
    sub: int | None
    sup: int | None
    entries: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeMismatch("entries do not match declared shape")
        bad = self.structural_violations()
        if bad:
            i, j = bad[0]
            raise StructuralZeroViolation(
                f"entry ({i},{j}) = {self.entries[i][j]} outside band sub={self.sub} sup={self.sup}")

    # construction helpers
    @classmethod
    def build(cls, rows, sub=None, sup=None):
        entries = tuple(tuple(r) for r in rows)
        ncols = len(entries[0]) if entries else 0
        return cls(len(entries), ncols, sub, sup, entries)

    def structural_violations(self):
        if self.sub is None and self.sup is None:
            return []
        out = []
        for i in range(self.rows):
            row = self.entries[i]
            lo = 0 if self.sub is None else max(0, i - self.sub)
            hi = self.cols if self.sup is None else min(self.cols, i + self.sup + 1)
            for j in range(0, min(lo, self.cols)):
                if row[j] != 0:
                    out.append((i, j))
            for j in range(max(hi, 0), self.cols):
                if row[j] != 0:
                    out.append((i, j))
        return out

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def n(self):
        return min(self.rows, self.cols)

    def tolist(self):
        return [list(r) for r in self.entries]

    def dense(self) -> DenseWindow:
        return DenseWindow(self.rows, self.cols, self.entries)

    def leading(self, m: int, cols: int | None = None) -> "BandWindow":
        c = m if cols is None else cols
        if m > self.rows or c > self.cols:
            raise WindowTooSmall(f"requested {m}x{c} from a {self.rows}x{self.cols} window")
        return BandWindow(m, c, self.sub, self.sup, tuple(r[:c] for r in self.entries[:m]))

    def with_band(self, sub, sup) -> "BandWindow":
        """Re-declare bandwidths; fails if an entry violates the new claim."""
        return BandWindow(self.rows, self.cols, sub, sup, self.entries)

    def diagonal(self, offset=0):
        """Entries ``W[m][m+offset]`` (offset >= 0) or ``W[m-offset][m]`` (offset < 0)."""
        if offset >= 0:
            return [self.entries[m][m + offset] for m in range(min(self.rows, self.cols - offset))]
        k = -offset
        return [self.entries[m + k][m] for m in range(min(self.cols, self.rows - k))]

    def map(self, fn) -> "BandWindow":
        return BandWindow(self.rows, self.cols, self.sub, self.sup,
                          tuple(tuple(fn(x) for x in r) for r in self.entries))

    @property
    def T(self) -> "BandWindow":
        return transpose(self)

    def __matmul__(self, other):
        return band_mul(self, other)

    def __add__(self, other):
        return band_add(self, other)

    def __sub__(self, other):
        return band_add(self, other, sign=-1)

    def __neg__(self):
        return scale(self, -1)


def _add_band(x, y):
    return None if x is None or y is None else x + y


def _max_band(x, y):
    return None if x is None or y is None else max(x, y)


def zeros(rows, cols=None):
    cols = rows if cols is None else cols
    return BandWindow(rows, cols, 0, 0, tuple((0,) * cols for _ in range(rows)))


def identity(n, one=1):
    return BandWindow(n, n, 0, 0, tuple(tuple(one if i == j else 0 for j in range(n)) for i in range(n)))


def shift(n, power=1):
    """Window of ``Lambda**power`` (ones on the ``power``-th superdiagonal)."""
    return BandWindow(n, n, 0, power, tuple(
        tuple(1 if j - i == power else 0 for j in range(n)) for i in range(n)))


def diag(values, offset=0, size=None):
    """Place ``values`` on one diagonal, indexed the way :meth:`BandWindow.diagonal` reads it."""
    k = abs(offset)
    n = size if size is not None else len(values) + k
    rows = [[0] * n for _ in range(n)]
    for m, v in enumerate(values):
        i, j = (m, m + k) if offset >= 0 else (m + k, m)
        if i < n and j < n:
            rows[i][j] = v
    return BandWindow(n, n, max(0, -offset), max(0, offset), tuple(tuple(r) for r in rows))


def from_dense(rows, lower=False, upper=False, sub=None, sup=None):
    """Wrap a dense grid; ``lower``/``upper`` declare triangular structure."""
    if lower:
        sup = 0
    if upper:
        sub = 0
    return BandWindow.build(rows, sub=sub, sup=sup)


def transpose(a: BandWindow) -> BandWindow:
    return BandWindow(a.cols, a.rows, a.sup, a.sub,
                      tuple(tuple(a.entries[i][j] for i in range(a.rows)) for j in range(a.cols)))


def valid_product_size(a: BandWindow, b: BandWindow) -> int:
    """Largest m such that the leading m x m block of ``a @ b`` is exact."""
    c1 = a.cols
    losses = [x for x in (a.sup, b.sub) if x is not None]
    if not losses:
        return 0
    return max(0, min(a.rows, b.cols, c1 - min(losses)))


def band_mul(a: BandWindow, b: BandWindow, size: int | None = None) -> BandWindow:
    """Exact product on the contamination-free leading square block.

    Entry (i, j) of the semi-infinite product needs inner indices beyond the
    window only when ``i + a.sup >= a.cols`` and ``j + b.sub >= a.cols``; the
    returned block avoids both.
    """
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    m = valid_product_size(a, b)
    if size is not None:
        if size > m:
            raise WindowTooSmall(f"requested interior {size} exceeds contamination-free size {m}")
        m = size
    inner = a.cols
    A, B = a.entries, b.entries
    rows = []
    for i in range(m):
        Ai = A[i]
        lo = 0 if a.sub is None else max(0, i - a.sub)
        hi = inner if a.sup is None else min(inner, i + a.sup + 1)
        row = []
        for j in range(m):
            klo, khi = lo, hi
            if b.sup is not None:
                klo = max(klo, j - b.sup)
            if b.sub is not None:
                khi = min(khi, j + b.sub + 1)
            s = 0
            for k in range(klo, khi):
                x = Ai[k]
                if x != 0:
                    y = B[k][j]
                    if y != 0:
                        s = s + x * y
            row.append(s)
        rows.append(tuple(row))
    sub = _add_band(a.sub, b.sub)
    sup = _add_band(a.sup, b.sup)
    return BandWindow(m, m, sub, sup, tuple(rows))


def band_add(a: BandWindow, b: BandWindow, sign=1) -> BandWindow:
    m = min(a.rows, b.rows)
    c = min(a.cols, b.cols)
    rows = tuple(tuple(a.entries[i][j] + sign * b.entries[i][j] for j in range(c)) for i in range(m))
    return BandWindow(m, c, _max_band(a.sub, b.sub), _max_band(a.sup, b.sup), rows)


def scale(a: BandWindow, s) -> BandWindow:
    return BandWindow(a.rows, a.cols, a.sub, a.sup, tuple(tuple(s * x for x in r) for r in a.entries))


def add_identity(a: BandWindow, s) -> BandWindow:
    """``a + s*I``."""
    rows = tuple(tuple(x + s if i == j else x for j, x in enumerate(r)) for i, r in enumerate(a.entries))
    sub = a.sub if a.sub is not None else None
    sup = a.sup if a.sup is not None else None
    return BandWindow(a.rows, a.cols, sub, sup, rows)


def diag_mul_left(d, a: BandWindow) -> BandWindow:
    """``diag(d) @ a`` (no contamination: diagonal factors are local)."""
    m = min(len(d), a.rows)
    return BandWindow(m, a.cols, a.sub, a.sup, tuple(tuple(d[i] * x for x in a.entries[i]) for i in range(m)))


def diag_mul_right(a: BandWindow, d) -> BandWindow:
    c = min(len(d), a.cols)
    return BandWindow(a.rows, c, a.sub, a.sup, tuple(tuple(r[j] * d[j] for j in range(c)) for r in a.entries))


def commutator(a: BandWindow, b: BandWindow) -> BandWindow:
    """``ab - ba`` on the common contamination-free interior."""
    ab = band_mul(a, b)
    ba = band_mul(b, a)
    m = min(ab.rows, ba.rows)
    return band_add(ab.leading(m), ba.leading(m), sign=-1)


def matpoly(coeffs, a: BandWindow) -> BandWindow:
    """Evaluate ``sum_k coeffs[k] a**k`` by Horner, left-multiplying by ``a``.

    Each step loses ``min(a.sup, P.sub)`` rows/cols of valid interior.
    """
    if not coeffs:
        return zeros(a.rows)
    acc = identity(a.rows, coeffs[-1]) if coeffs[-1] != 0 else zeros(a.rows)
    for c in reversed(coeffs[:-1]):
        acc = band_mul(a.leading(min(a.rows, acc.rows)), acc.leading(min(a.rows, acc.rows)))
        acc = add_identity(acc, c)
    return acc


def residual_norm(a, b):
    """Max entrywise ``|a - b|``; both arguments must have the same shape."""
    ea = a.entries if hasattr(a, "entries") else a
    eb = b.entries if hasattr(b, "entries") else b
    if len(ea) != len(eb) or any(len(x) != len(y) for x, y in zip(ea, eb)):
        raise ShapeMismatch("residual_norm needs equal shapes")
    r = mpq(0)
    for x, y in zip(ea, eb):
        for u, v in zip(x, y):
            d = abs(u - v)
            if d > r:
                r = d
    return r


def crop_common(a: BandWindow, b: BandWindow, size: int | None = None):
    m = min(a.rows, b.rows, a.cols, b.cols)
    if size is not None:
        if size > m:
            raise WindowTooSmall(f"interior {size} requested, only {m} available")
        m = size
    return a.leading(m), b.leading(m)


def max_abs(values):
    r = mpq(0)
    for v in values:
        d = abs(v)
        if d > r:
            r = d
    return r


def diag_shift_down(d, k=1):
    """``a_-^k`` on a diagonal sequence: ``(m_k, m_{k+1}, ...)``."""
    return list(d[k:])


def diag_shift_up(d, k=1):
    """``a_+^k``: ``(0,...,0, m_0, m_1, ...)`` keeping the length."""
    return [0] * k + list(d[: len(d) - k]) if k else list(d)


def mul(*factors: BandWindow) -> BandWindow:
    """Chain product of windows, cropping inner dimensions to their common size.

    Cropping is safe: each product still only keeps its contamination-free block.
    """
    acc = factors[0]
    for b in factors[1:]:
        inner = min(acc.cols, b.rows)
        a2 = acc if acc.cols == inner else acc.leading(acc.rows, inner)
        b2 = b if b.rows == inner else b.leading(inner, b.cols)
        acc = band_mul(a2, b2)
    return acc
