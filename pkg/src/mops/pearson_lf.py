"""Pearson symmetry of the moment matrix and the Laguerre-Freud matrix Psi.

Psi is built twice: from the left, ``Pi^- theta(T)``, and from the right,
``sum_a sigma_a(T^(a))^T (Pi^(a)+)^T``. Each route satisfies one of the two
polynomial actions exactly; their agreement and the band structure
``[-pM, deg theta]`` hold only up to the series tail of the truncated measure.
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .kernel import BandWindow, band_add, commutator, matpoly, mul, shift, transpose
from .opsys import poly_add, poly_max_abs, poly_mul, poly_taylor_shift, trim, type_I_system
from .recurrence import PascalData, RecurrenceData, partial_shift
from .report import Report, judge


@dataclass(frozen=True, eq=False)
class LFData:
    Psi_left: BandWindow
    Psi_right: BandWindow
    sub: int                # p * M
    sup: int                # deg theta
    n: int                  # interior on which checks are reported

    def psi(self, d, route="left"):
        """Diagonal ``psi^(d)``: ``Psi[m][m+d]`` for d >= 0, ``Psi[m-d][m]`` for d < 0."""
        W = self.Psi_left if route == "left" else self.Psi_right
        return W.diagonal(d)

    def psi_diagonals(self, route="left"):
        return {d: self.psi(d, route) for d in range(-self.sub, self.sup + 1)}


def _sum(windows):
    m = min(w.rows for w in windows)
    acc = windows[0].leading(m)
    for w in windows[1:]:
        acc = band_add(acc, w.leading(m))
    return acc


def sigma_coefficients(ws, a, scalar=None):
    """Ascending coefficients of sigma_a, optionally with eta replaced by ``scalar``."""
    s = ws.sigmas[a - 1]
    coeffs = s.coefficients()
    if scalar is not None:
        coeffs = [c / s.eta * scalar for c in coeffs] if s.eta != 0 else [c * 0 for c in coeffs]
    return coeffs


def build_psi(rd: RecurrenceData, pd: PascalData, ws, n: int | None = None, eta_scalars=None) -> LFData:
    """Both routes to Psi on their common contamination-free interior.

    ``eta_scalars`` (one per weight) overrides the eta entering sigma_a; the jet
    machinery passes ``eta e^eps`` here.
    """
    p = rd.p
    theta = ws.theta_coefficients()
    left = mul(pd.Pi_minus, matpoly(theta, rd.T))
    parts = []
    for a in range(1, p + 1):
        scal = eta_scalars[a - 1] if eta_scalars is not None else None
        sig = matpoly(sigma_coefficients(ws, a, scal), rd.T_partial[a - 1])
        parts.append(mul(transpose(sig), transpose(pd.Pi_partial_plus[a - 1])))
    right = _sum(parts)
    m = min(left.rows, right.rows)
    interior = m if n is None else min(n, m)
    return LFData(left.leading(m), right.leading(m), p * ws.deg_sigma, ws.deg_theta, interior)


# --------------------------------------------------------------------------
# symmetry of the moment matrix

def moment_symmetry_sides(ws, ms, size):
    """``theta(Lambda) M`` and ``L+ M (sum_a L^(a)+ sigma_a(Lambda^(a)))^T`` on a common block."""
    from .moments import moment_matrix
    from .recurrence import build_pascal

    p = ws.p
    W = size + max(ws.deg_theta, p * ws.deg_sigma) + 1
    M = moment_matrix(ms, W).window
    lhs = mul(matpoly(ws.theta_coefficients(), shift(W, 1)), M)
    pd = build_pascal(p, W)
    G = []
    for a in range(1, p + 1):
        sig = matpoly(sigma_coefficients(ws, a), partial_shift(W, p, a))
        G.append(mul(pd.Lpartial_plus[a - 1], sig))
    Gs = _sum(G)
    rhs = mul(pd.Lplus, M, transpose(Gs))
    return lhs.leading(size), rhs.leading(size)


def verify_moment_symmetry(ws, ms, budget, size) -> Report:
    lhs, rhs = moment_symmetry_sides(ws, ms, size)
    rep = Report("moment symmetry")
    res, locs = _diff(lhs, rhs)
    rep.add(judge("symMom: theta(Lambda) M = L+ M (sum L^(a)+ sigma_a(Lambda^(a)))^T",
                  res, budget, locs))
    return rep


def _diff(a, b, size=None):
    m = min(a.rows, b.rows, a.cols, b.cols) if size is None else size
    res, locs = [], []
    for i in range(m):
        for j in range(m):
            res.append(a.entries[i][j] - b.entries[i][j])
            locs.append((i, j))
    return res, locs


# --------------------------------------------------------------------------
# Psi checks

def verify_psi(lf: LFData, rd: RecurrenceData, budget) -> Report:
    """Route equality, band structure and ``[Psi, T] = Psi`` for both routes."""
    rep = Report("laguerre-freud matrix")
    n = lf.n
    res, locs = _diff(lf.Psi_left, lf.Psi_right, n)
    rep.add(judge("Psi: Pi^- theta(T) = sum sigma_a(T^(a))^T (Pi^(a)+)^T", res, budget, locs))
    res, locs = [], []
    for name, W in (("left", lf.Psi_left), ("right", lf.Psi_right)):
        for i in range(n):
            for j in range(n):
                if i - j > lf.sub or j - i > lf.sup:
                    res.append(W.entries[i][j])
                    locs.append((name, i, j))
    rep.add(judge(f"Psi band [-{lf.sub}, {lf.sup}]", res, budget, locs))
    for name, W in (("left", lf.Psi_left), ("right", lf.Psi_right)):
        C = commutator(W, rd.T.leading(min(W.rows, rd.T.rows)))
        m = min(n, C.rows)
        res, locs = _diff(C, W, m)
        rep.add(judge(f"[Psi, T] = Psi ({name} route)", res, budget, locs))
    return rep


def _row_times_polys(row, polys, upto, band):
    """``sum_j row[j] polys[j]`` and the largest coefficient among the polys in ``band``."""
    acc, scale = [], mpq(1)
    lo, hi = band
    for j in range(min(upto, len(row), len(polys))):
        x = row[j]
        if x != 0:
            acc = poly_add(acc, [x * c for c in polys[j]])
        if lo <= j <= hi:
            scale = max(scale, poly_max_abs(polys[j]))
    return trim(acc), scale


def verify_psi_action(lf: LFData, f, ws, budget) -> Report:
    """``theta(x) B(x-1) = Psi B(x)`` and ``Psi^T A^(a)(x) = sigma_a(x) A^(a)(x+1)``.

    The left route acts on B with a finite row sum; the right route acts on A
    with a finite column sum. Both are exact; the crossed pairings need the
    infinite tail of the other route and are reported as well. Residuals are
    divided by the largest polynomial coefficient inside the band of the row,
    since a tail-sized error in Psi is multiplied by it (type I coefficients
    grow geometrically with the degree).
    """
    p = ws.p
    rep = Report("laguerre-freud action")
    theta = ws.theta_coefficients()
    B = [list(f.S.entries[k][: k + 1]) for k in range(f.n)]
    for name, W in (("left", lf.Psi_left), ("right", lf.Psi_right)):
        rows = min(lf.n, f.n - lf.sup - 1)
        res, locs = [], []
        for i in range(rows):
            lhs = poly_mul(theta, poly_taylor_shift(B[i], -1))
            rhs, scale = _row_times_polys(W.entries[i], B, W.cols, (i - lf.sub, i + lf.sup))
            for k, d in enumerate(poly_add(lhs, rhs, -1)):
                res.append(d / scale)
                locs.append((i, k))
        rep.add(judge(f"theta(x) B(x-1) = Psi B(x) ({name} route)", res, budget, locs))
    Wt = {"left": transpose(lf.Psi_left), "right": transpose(lf.Psi_right)}
    for a in range(1, p + 1):
        A = [list(type_I_system(f, p, k).polys[a - 1].coeffs) for k in range(f.n)]
        sig = ws.sigmas[a - 1].coefficients()
        for name, W in Wt.items():
            rows = min(lf.n, W.rows - lf.sub)
            res, locs = [], []
            for i in range(rows):
                lhs, scale = _row_times_polys(W.entries[i], A, W.cols, (i - lf.sup, i + lf.sub))
                rhs = poly_mul(sig, poly_taylor_shift(A[i], 1))
                for k, d in enumerate(poly_add(lhs, rhs, -1)):
                    res.append(d / scale)
                    locs.append((i, k))
            rep.add(judge(f"Psi^T A^({a}) = sigma_{a}(x) A^({a})(x+1) ({name} route)",
                          res, budget, locs))
    return rep


__all__ = ["LFData", "build_psi", "verify_psi", "verify_psi_action", "verify_moment_symmetry",
           "moment_symmetry_sides", "sigma_coefficients"]
