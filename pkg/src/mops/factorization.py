"""Gauss-Borel factorization ``M = S^{-1} H S~^{-T}`` of leading moment windows.

The elimination is written only in terms of ``+ - * /`` so it runs unchanged
over exact rationals and over :class:`~mops.series.Jet` entries; in the latter
case every factor comes out with its Euler derivatives attached.
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import IndexOutOfRange, NonPerfectSystem
from .kernel import BandWindow, band_mul, diag_mul_left, residual_norm, transpose
from .report import FAIL, PASS, Check, Report, ToleranceBudget


def _is_zero_pivot(x):
    c0 = x.c[0] if hasattr(x, "c") else x
    return c0 == 0


def _unit_lower_inverse(L, n, one):
    """Inverse of a unit lower-triangular grid by forward substitution."""
    inv = [[0] * n for _ in range(n)]
    for j in range(n):
        inv[j][j] = one
        for i in range(j + 1, n):
            s = 0
            Li = L[i]
            for k in range(j, i):
                x = Li[k]
                if x != 0:
                    y = inv[k][j]
                    if y != 0:
                        s = s + x * y
            inv[i][j] = -s
    return inv


def _lower(grid):
    return BandWindow(len(grid), len(grid), None, 0, tuple(tuple(r) for r in grid))


@dataclass(frozen=True, eq=False)
class GBFactorization:
    n: int
    S: BandWindow
    H: tuple
    S_tilde: BandWindow
    S_inv: BandWindow
    S_tilde_inv: BandWindow

    def diagonal(self, which: str, j: int):
        """Diagonal ``X^[j]_m = X[m+j][m]``; ``which`` in S, S~, S^-1, S~^-1 (aliases allowed)."""
        key = {"S~": "S_tilde", "S^-1": "S_inv", "S~^-1": "S_tilde_inv"}.get(which, which)
        mats = {"S": self.S, "S_tilde": self.S_tilde, "S_inv": self.S_inv,
                "S_tilde_inv": self.S_tilde_inv}
        if key not in mats:
            raise ValueError(f"unknown factor {which!r}")
        if not 0 <= j < self.n:
            raise IndexOutOfRange(f"diagonal {j} outside window of size {self.n}")
        return mats[key].diagonal(-j)

    def Sd(self, j):
        """``S^[j]`` for j >= 0 and the diagonals of ``S^{-1}`` for j < 0."""
        return self.S.diagonal(-j) if j >= 0 else self.S_inv.diagonal(j)

    def Std(self, j):
        return self.S_tilde.diagonal(-j) if j >= 0 else self.S_tilde_inv.diagonal(j)

    def map(self, fn):
        """Apply ``fn`` to every scalar (e.g. extract a jet coefficient)."""
        return GBFactorization(self.n, self.S.map(fn), tuple(fn(h) for h in self.H),
                               self.S_tilde.map(fn), self.S_inv.map(fn), self.S_tilde_inv.map(fn))


def gauss_borel(mm, one=mpq(1)) -> GBFactorization:
    """LDU factorization without pivoting of a square window (rationals or jets).

    ``mm`` may be a :class:`~mops.moments.MomentMatrixWindow`, a window or a grid.
    Raises :class:`NonPerfectSystem` with the order of the vanishing tau.
    """
    rows = mm.entries if hasattr(mm, "entries") else mm
    n = len(rows)
    A = [list(r[:n]) for r in rows[:n]]
    L = [[0] * n for _ in range(n)]      # unit lower: M = L D U
    Ut = [[0] * n for _ in range(n)]     # U transposed, unit lower
    H = []
    for k in range(n):
        piv = A[k][k]
        if _is_zero_pivot(piv):
            raise NonPerfectSystem(k + 1)
        H.append(piv)
        inv = 1 / piv if not hasattr(piv, "inverse") else piv.inverse()
        L[k][k] = one
        Ut[k][k] = one
        Ak = A[k]
        for i in range(k + 1, n):
            L[i][k] = A[i][k] * inv
            Ut[i][k] = Ak[i] * inv
        for i in range(k + 1, n):
            lik = L[i][k]
            if lik == 0:
                continue
            Ai = A[i]
            for j in range(k + 1, n):
                x = Ak[j]
                if x != 0:
                    Ai[j] = Ai[j] - lik * x
    S = _unit_lower_inverse(L, n, one)
    S_tilde = _unit_lower_inverse(Ut, n, one)
    return GBFactorization(n, _lower(S), tuple(H), _lower(S_tilde), _lower(L), _lower(Ut))


def diagonal_extract(f: GBFactorization, which: str, j: int):
    return f.diagonal(which, j)


def reconstruct(f: GBFactorization) -> BandWindow:
    """``S^{-1} diag(H) S~^{-T}``."""
    left = f.S_inv
    right = diag_mul_left(list(f.H), transpose(f.S_tilde_inv))
    return band_mul(left, right)


def verify_factorization(f: GBFactorization, mm, taus=None) -> Report:
    """Exact checks: reconstruction, inverse pairs and (optionally) ``H_m tau_m = tau_{m+1}``."""
    rep = Report("factorization")
    rows = mm.entries if hasattr(mm, "entries") else mm
    target = tuple(tuple(r[: f.n]) for r in rows[: f.n])
    exact = ToleranceBudget.exact()
    r = residual_norm(reconstruct(f).entries, target)
    rep.add(Check("reconstruction", r, exact, PASS if r == 0 else FAIL))
    ident = tuple(tuple(mpq(1) if i == j else mpq(0) for j in range(f.n)) for i in range(f.n))
    for name, a, b in (("S S^-1 = I", f.S, f.S_inv), ("S~ S~^-1 = I", f.S_tilde, f.S_tilde_inv)):
        r = residual_norm(band_mul(a, b).entries, ident)
        rep.add(Check(name, r, exact, PASS if r == 0 else FAIL))
    if taus is not None:
        bad = []
        worst = mpq(0)
        for m in range(min(f.n, len(taus) - 1)):
            d = f.H[m] * taus[m] - taus[m + 1]
            if d != 0:
                bad.append(m)
                worst = max(worst, abs(d))
        rep.add(Check("H_m tau_m = tau_{m+1}", worst, exact, PASS if not bad else FAIL, bad))
    return rep
