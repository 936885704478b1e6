"""Type I and type II multiple orthogonal polynomials on the step line.

Polynomials are ascending coefficient lists. Row ``n`` of ``S`` is the monic
type II polynomial ``B_n``. Row ``n`` of ``H^{-1} S~`` carries the type I
coefficients; column ``j`` of that row belongs to weight ``j % p + 1`` and power
``j // p`` (the same interleaving as the moment matrix).
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import IndexOutOfRange, NonPerfectSystem
from .moments import MomentStore, det, moment_matrix
from .report import FAIL, PASS, Check, Report, ToleranceBudget


# --------------------------------------------------------------------------
# polynomial helpers

def trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(c):
    return len(trim(c)) - 1


def poly_eval(c, x):
    r = mpq(0)
    for a in reversed(c):
        r = r * x + a
    return r


def poly_add(a, b, sign=1):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + sign * (b[i] if i < len(b) else 0) for i in range(n)]


def poly_scale(a, s):
    return [s * x for x in a]


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_mul_x(a, k=1):
    return [mpq(0)] * k + list(a)


def poly_taylor_shift(c, h):
    """Coefficients of ``c(x + h)`` (synthetic division, no matrices)."""
    c = [mpq(x) for x in c]
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] += h * c[j + 1]
    return c


def poly_from_roots(lead, roots):
    coeffs = [mpq(lead)]
    for r in roots:
        coeffs = poly_add(poly_mul_x(coeffs), poly_scale(coeffs, r))
    return coeffs


def poly_equal(a, b):
    return trim(poly_add(a, b, -1)) == []


def poly_max_abs(c):
    return max((abs(x) for x in c), default=mpq(0))


@dataclass(frozen=True)
class PolyVec:
    coeffs: tuple

    @property
    def degree(self):
        return degree(self.coeffs)

    def __call__(self, x):
        return poly_eval(self.coeffs, x)


@dataclass(frozen=True)
class TypeISystem:
    n: int
    polys: tuple        # polys[a-1] is A^(a)_n


def type_I_degree(n, a, p):
    """``ceil((n+2-a)/p) - 1``."""
    return -((-(n + 2 - a)) // p) - 1


# --------------------------------------------------------------------------
# type II

def type_II_poly(f, n) -> PolyVec:
    if not 0 <= n < f.n:
        raise IndexOutOfRange(f"B_{n} needs a factorization of size > {n}")
    return PolyVec(tuple(f.S.entries[n][: n + 1]))


def type_II_matrix(f):
    """Coefficient grid of ``B``: row n holds ``B_n``."""
    return [list(f.S.entries[n][: n + 1]) for n in range(f.n)]


def type_II_poly_det(ms: MomentStore, n: int) -> PolyVec:
    """Bordered-determinant formula expanded along the monomial column, over ``tau_n``."""
    if n == 0:
        return PolyVec((mpq(1),))
    mm = moment_matrix(ms, n, rows=n + 1)
    rows = [list(r) for r in mm.entries]
    tau_n = det(rows[:n])
    if tau_n == 0:
        raise NonPerfectSystem(n)
    coeffs = []
    for i in range(n + 1):
        minor = [rows[r] for r in range(n + 1) if r != i]
        coeffs.append((-1) ** (i + n) * det(minor) / tau_n)
    return PolyVec(tuple(coeffs))


# --------------------------------------------------------------------------
# type I

def _split_type_I(row, p):
    polys = [[] for _ in range(p)]
    for j, c in enumerate(row):
        a, q = j % p, j // p
        while len(polys[a]) <= q:
            polys[a].append(mpq(0))
        polys[a][q] = c
    return tuple(PolyVec(tuple(trim(pl))) for pl in polys)


def type_I_row(f, n):
    """Row n of ``H^{-1} S~`` (interleaved type I coefficients)."""
    return [x / f.H[n] for x in f.S_tilde.entries[n][: n + 1]]


def type_I_system(f, ms_or_p, n) -> TypeISystem:
    p = ms_or_p if isinstance(ms_or_p, int) else ms_or_p.p
    if not 0 <= n < f.n:
        raise IndexOutOfRange(f"A_{n} needs a factorization of size > {n}")
    return TypeISystem(n, _split_type_I(type_I_row(f, n), p))


def type_I_system_det(ms: MomentStore, n: int) -> TypeISystem:
    """Replace the last row of ``M^[n+1]`` by the interleaved monomials, over ``tau_{n+1}``."""
    mm = moment_matrix(ms, n + 1)
    rows = [list(r) for r in mm.entries]
    tau = det(rows)
    if tau == 0:
        raise NonPerfectSystem(n + 1)
    row = []
    for j in range(n + 1):
        minor = [r[:j] + r[j + 1:] for r in rows[:n]]
        row.append((-1) ** (n + j) * det(minor) / tau)
    return TypeISystem(n, _split_type_I(row, ms.p))


def type_I_matrix(f, p, a):
    """Coefficient grid of ``A^(a)``: row n holds ``A^(a)_n``."""
    return [list(type_I_system(f, p, n).polys[a - 1].coeffs) for n in range(f.n)]


# --------------------------------------------------------------------------
# orthogonality against the truncated measure

def _pairing(tm, a, poly, m):
    w = tm.values[a - 1]
    s = mpq(0)
    for k, wk in enumerate(w):
        if wk != 0:
            s += poly_eval(poly, k) * wk * mpq(k) ** m
    return s


def verify_orthogonality(tm, f, n_max=None, type_II_override=None, type_I_override=None) -> Report:
    """Exact multiple orthogonality of both types against the truncated measure.

    Type II: ``sum_k B_n(k) w_a(k) k^m = 0`` for ``m <= deg A^(a)_{n-1}``.
    Type I: ``sum_a sum_k A^(a)_n(k) w_a(k) k^m = 0`` for ``m < n`` and ``= 1`` at ``m = n``
    (interleaved pairing, which is the biorthogonality normalization).
    The overrides replace individual polynomials (fault injection).
    """
    p = tm.p
    n_max = f.n if n_max is None else min(n_max, f.n)
    exact = ToleranceBudget.exact()
    rep = Report("orthogonality")
    bad, worst = [], mpq(0)
    for n in range(n_max):
        B = list(type_II_override.get(n, f.S.entries[n][: n + 1])) if type_II_override else \
            list(f.S.entries[n][: n + 1])
        for a in range(1, p + 1):
            for m in range(type_I_degree(n - 1, a, p) + 1):
                r = _pairing(tm, a, B, m)
                if r != 0:
                    bad.append(("II", n, a, m))
                    worst = max(worst, abs(r))
    rep.add(Check("type II orthogonality", worst, exact, PASS if not bad else FAIL, bad))
    bad, worst = [], mpq(0)
    for n in range(n_max):
        sysA = type_I_system(f, p, n)
        polys = [list(pl.coeffs) for pl in sysA.polys]
        if type_I_override and n in type_I_override:
            polys = [list(x) for x in type_I_override[n]]
        # the pairing of row n with column j of M: moments of weight j%p+1, order j//p + ...
        for m in range(n + 1):
            s = mpq(0)
            for a in range(1, p + 1):
                s += _pairing(tm, a, polys[a - 1], m)
            target = 1 if m == n else 0
            if s != target:
                bad.append(("I", n, m))
                worst = max(worst, abs(s - target))
    rep.add(Check("type I orthogonality", worst, exact, PASS if not bad else FAIL, bad))
    return rep


def verify_determinantal(ms: MomentStore, f, n_max: int = 6) -> Report:
    """Determinantal formulas for ``B_n`` and ``A^(a)_n`` against the factorization, exactly."""
    exact = ToleranceBudget.exact()
    rep = Report("determinantal formulas")
    n_max = min(n_max, f.n - 1)
    bad, worst = [], mpq(0)
    for n in range(n_max + 1):
        d = trim(poly_add(type_II_poly_det(ms, n).coeffs, type_II_poly(f, n).coeffs, -1))
        if d:
            bad.append(n)
            worst = max(worst, poly_max_abs(d))
    rep.add(Check("B_n determinantal = factorization", worst, exact, PASS if not bad else FAIL, bad))
    bad, worst = [], mpq(0)
    for n in range(n_max + 1):
        for a, (x, y) in enumerate(zip(type_I_system_det(ms, n).polys, type_I_system(f, ms, n).polys), 1):
            d = trim(poly_add(x.coeffs, y.coeffs, -1))
            if d:
                bad.append((n, a))
                worst = max(worst, poly_max_abs(d))
    rep.add(Check("A^(a)_n determinantal = factorization", worst, exact, PASS if not bad else FAIL, bad))
    return rep
