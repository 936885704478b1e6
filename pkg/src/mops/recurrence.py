"""Recurrence matrix T, partial matrices T^(a), Pascal matrices and their dressings.

Diagonals are indexed by column: ``alpha^(k)_m = T[m+k][m]``, so
``T = Lambda + alpha^(0) + Lambda^T alpha^(1) + ... + (Lambda^T)^p alpha^(p)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

from gmpy2 import mpq

from .errors import WindowTooSmall
from .kernel import (BandWindow, band_mul, diag_mul_left, diag_mul_right, mul, residual_norm,
                     shift, transpose)
from .opsys import (poly_add, poly_mul_x, poly_taylor_shift, trim, type_I_system)
from .report import FAIL, PASS, Check, Report, ToleranceBudget


def projector(n, p, a):
    """``I^(a)``: ones at indices congruent to ``a-1`` mod p."""
    return [1 if i % p == a - 1 else 0 for i in range(n)]


def partial_shift(n, p, a):
    """``Lambda^(a) = Lambda^p I^(a)``: ones at ``(i, i+p)`` with ``i+p = a-1 mod p``."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n - p):
        if (i + p) % p == a - 1:
            rows[i][i + p] = 1
    return BandWindow(n, n, 0, p, tuple(tuple(r) for r in rows))


def _inv_list(H):
    return [1 / h if not hasattr(h, "inverse") else h.inverse() for h in H]


@dataclass(frozen=True, eq=False)
class RecurrenceData:
    p: int
    T: BandWindow
    T_dual: BandWindow
    alphas: tuple       # alphas[k][m] = T[m+k][m], k = 0..p
    T_partial: tuple    # T^(a), a = 1..p

    @property
    def n(self):
        return self.T.rows

    def alpha(self, k, m):
        return self.alphas[k][m]


def build_T(f, p: int) -> RecurrenceData:
    """``T = S Lambda S^{-1}``; also the dual route and ``T^(a) = H^-1 S~ Lambda^(a) S~^-1 H``."""
    n = f.n
    if n < p + 2:
        raise WindowTooSmall(f"factorization of size {n} too small for p={p}")
    lam = shift(n, 1)
    T = mul(f.S, lam, f.S_inv).with_band(p, 1)
    Hinv = _inv_list(f.H)
    left = diag_mul_left(list(f.H), transpose(f.S_tilde_inv))
    right = diag_mul_right(transpose(f.S_tilde), Hinv)
    T_dual = mul(left, transpose(shift(n, p)), right).with_band(p, 1)
    alphas = tuple(tuple(T.diagonal(-k)) for k in range(p + 1))
    partial = []
    for a in range(1, p + 1):
        core = mul(f.S_tilde, partial_shift(n, p, a), f.S_tilde_inv)
        partial.append(diag_mul_right(diag_mul_left(Hinv, core), list(f.H)))
    return RecurrenceData(p, T, T_dual, alphas, tuple(partial))


def alpha_table(rd: RecurrenceData, n_rows=None):
    """Rows ``(n, alpha^(0)_n, ..., alpha^(p)_n)`` where all entries are available."""
    n_rows = len(rd.alphas[rd.p]) if n_rows is None else n_rows
    return [[n] + [rd.alphas[k][n] for k in range(rd.p + 1)] for n in range(n_rows)]


def verify_T(rd: RecurrenceData) -> Report:
    """Exact: both T routes agree, unit superdiagonal, ``alpha^(p) H = a_-^p H``, sum of T^(a) = T^T."""
    rep = Report("recurrence matrix")
    exact = ToleranceBudget.exact()
    m = min(rd.T.rows, rd.T_dual.rows)
    r = residual_norm(rd.T.leading(m).entries, rd.T_dual.leading(m).entries)
    rep.add(Check("T = S Lambda S^-1 = H S~^-T (Lambda^T)^p S~^T H^-1", r, exact,
                  PASS if r == 0 else FAIL))
    sup = rd.T.diagonal(1)
    r = max(abs(x - 1) for x in sup) if sup else mpq(0)
    rep.add(Check("T superdiagonal = 1", r, exact, PASS if r == 0 else FAIL))
    total = rd.T_partial[0]
    for t in rd.T_partial[1:]:
        total = total + t
    m = min(total.rows, rd.T.rows)
    r = residual_norm(total.leading(m).entries, transpose(rd.T).leading(m).entries)
    rep.add(Check("sum_a T^(a) = T^T", r, exact, PASS if r == 0 else FAIL))
    return rep


def verify_alpha_p(rd: RecurrenceData, H) -> Check:
    p = rd.p
    res = [rd.alphas[p][m] * H[m] - H[m + p] for m in range(len(rd.alphas[p])) if m + p < len(H)]
    worst = max((abs(x) for x in res), default=mpq(0))
    return Check("alpha^(p) H = a_-^p H", worst, ToleranceBudget.exact(),
                 PASS if worst == 0 else FAIL)


def _apply_rows(M: BandWindow, polys, n_rows):
    """Row n of ``M P`` where P is a vector of polynomials; needs polys up to the band."""
    out = []
    for n in range(n_rows):
        acc = []
        for j in range(M.cols):
            x = M.entries[n][j]
            if x != 0:
                acc = poly_add(acc, [x * c for c in polys[j]])
        out.append(trim(acc))
    return out


def verify_recurrence(rd: RecurrenceData, f) -> Report:
    """``T B = x B`` and ``T^T A^(a) = x A^(a)`` as coefficient identities, exact."""
    p = rd.p
    exact = ToleranceBudget.exact()
    rep = Report("recurrence")
    n = rd.T.rows
    B = [list(f.S.entries[k][: k + 1]) for k in range(n)]
    rows = n - 1
    TB = _apply_rows(rd.T.leading(rows, n), B, rows)
    bad, worst = [], mpq(0)
    for k in range(rows):
        d = trim(poly_add(TB[k], poly_mul_x(B[k]), -1))
        if d:
            bad.append(k)
            worst = max(worst, max(abs(x) for x in d))
    rep.add(Check("T B = x B", worst, exact, PASS if not bad else FAIL, bad))
    Tt = transpose(rd.T)
    rows = n - p
    for a in range(1, p + 1):
        A = [list(type_I_system(f, p, k).polys[a - 1].coeffs) for k in range(n)]
        TA = _apply_rows(Tt.leading(rows, n), A, rows)
        bad, worst = [], mpq(0)
        for k in range(rows):
            d = trim(poly_add(TA[k], poly_mul_x(A[k]), -1))
            if d:
                bad.append(k)
                worst = max(worst, max(abs(x) for x in d))
        rep.add(Check(f"T^T A^({a}) = x A^({a})", worst, exact, PASS if not bad else FAIL, bad))
    return rep


# --------------------------------------------------------------------------
# Pascal matrices

@dataclass(frozen=True, eq=False)
class PascalData:
    p: int
    Lplus: BandWindow
    Lminus: BandWindow
    Lpartial_plus: tuple
    Lpartial_minus: tuple
    Pi_plus: BandWindow | None = None
    Pi_minus: BandWindow | None = None
    Pi_partial_plus: tuple = ()
    Pi_partial_minus: tuple = ()


def pascal(n, sign=1):
    return BandWindow(n, n, None, 0, tuple(
        tuple(sign ** (i + j) * comb(i, j) if i >= j else 0 for j in range(n)) for i in range(n)))


def partial_pascal(n, p, a, sign=1):
    """Entries ``(sign)^(k+l) C(k,l)`` at ``(pk+a-1, pl+a-1)``."""
    rows = [[0] * n for _ in range(n)]
    for k in range((n - a) // p + 1):
        i = p * k + a - 1
        if i >= n:
            break
        for l in range(k + 1):
            rows[i][p * l + a - 1] = sign ** (k + l) * comb(k, l)
    return BandWindow(n, n, None, 0, tuple(tuple(r) for r in rows))


def build_pascal(p, size) -> PascalData:
    return PascalData(
        p, pascal(size, 1), pascal(size, -1),
        tuple(partial_pascal(size, p, a, 1) for a in range(1, p + 1)),
        tuple(partial_pascal(size, p, a, -1) for a in range(1, p + 1)))


def dress_pascal(f, pd: PascalData) -> PascalData:
    """``Pi = S L S^-1`` and ``Pi^(a) = H^-1 S~ L^(a) S~^-1 H`` (lower triangular, no loss)."""
    n = f.n
    if pd.Lplus.rows < n:
        raise WindowTooSmall("Pascal windows smaller than the factorization")
    Hinv = _inv_list(f.H)

    def conj(L):
        return band_mul(band_mul(f.S, L.leading(n)), f.S_inv)

    def conj_t(L):
        core = band_mul(band_mul(f.S_tilde, L.leading(n)), f.S_tilde_inv)
        return diag_mul_right(diag_mul_left(Hinv, core), list(f.H))

    return PascalData(pd.p, pd.Lplus, pd.Lminus, pd.Lpartial_plus, pd.Lpartial_minus,
                      conj(pd.Lplus), conj(pd.Lminus),
                      tuple(conj_t(L) for L in pd.Lpartial_plus),
                      tuple(conj_t(L) for L in pd.Lpartial_minus))


def verify_pascal(pd: PascalData) -> Report:
    """Exact: ``L+ L- = I`` and monomial shifts ``X(x+1) = L+ X(x)`` (binomial theorem)."""
    exact = ToleranceBudget.exact()
    rep = Report("pascal")
    n = pd.Lplus.rows
    prod = band_mul(pd.Lplus, pd.Lminus)
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    r = residual_norm(prod.entries, ident)
    rep.add(Check("L+ L- = I", r, exact, PASS if r == 0 else FAIL))
    worst = mpq(0)
    for sign, L in ((1, pd.Lplus), (-1, pd.Lminus)):
        for i in range(n):
            mono = [0] * i + [1]
            d = trim(poly_add(poly_taylor_shift(mono, sign), L.entries[i][: i + 1], -1))
            if d:
                worst = max(worst, max(abs(x) for x in d))
    rep.add(Check("X(x+-1) = L+- X(x)", worst, exact, PASS if worst == 0 else FAIL))
    if pd.Pi_plus is not None:
        r = residual_norm(band_mul(pd.Pi_plus, pd.Pi_minus).entries,
                          tuple(tuple(1 if i == j else 0 for j in range(pd.Pi_plus.rows))
                                for i in range(pd.Pi_plus.rows)))
        rep.add(Check("Pi+ Pi- = I", r, exact, PASS if r == 0 else FAIL))
    return rep


def verify_shifts(pd: PascalData, f) -> Report:
    """``B(x+-1) = Pi+- B(x)`` and ``A^(a)(x+-1) = Pi^(a)+- A^(a)(x)``, exact.

    Left sides are computed by Taylor-shifting coefficient lists.
    """
    p = pd.p
    exact = ToleranceBudget.exact()
    rep = Report("pascal shifts")
    n = f.n
    B = [list(f.S.entries[k][: k + 1]) for k in range(n)]
    for sign, Pi, label in ((1, pd.Pi_plus, "+"), (-1, pd.Pi_minus, "-")):
        PB = _apply_rows(Pi, B, n)
        bad, worst = [], mpq(0)
        for k in range(n):
            d = trim(poly_add(poly_taylor_shift(B[k], sign), PB[k], -1))
            if d:
                bad.append(k)
                worst = max(worst, max(abs(x) for x in d))
        rep.add(Check(f"B(x{label}1) = Pi{label} B(x)", worst, exact, PASS if not bad else FAIL, bad))
    for a in range(1, p + 1):
        A = [list(type_I_system(f, p, k).polys[a - 1].coeffs) for k in range(n)]
        for sign, Pis, label in ((1, pd.Pi_partial_plus, "+"), (-1, pd.Pi_partial_minus, "-")):
            PA = _apply_rows(Pis[a - 1], A, n)
            bad, worst = [], mpq(0)
            for k in range(n):
                d = trim(poly_add(poly_taylor_shift(A[k], sign), PA[k], -1))
                if d:
                    bad.append(k)
                    worst = max(worst, max(abs(x) for x in d))
            rep.add(Check(f"A^({a})(x{label}1) = Pi^({a}){label} A^({a})(x)", worst, exact,
                          PASS if not bad else FAIL, bad))
    return rep
