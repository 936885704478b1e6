"""Euler-derivative flows of the factorization: the Toda-type identities.

The moment window is lifted to jets in the Euler direction (column bumps give
the exact derivatives of truncated moments) and factorized over jets, so every
factor carries its exact derivatives. The identities below are then checked
as exact rational equalities: the Euler derivative commutes with truncation.

Diagonals are indexed by column throughout: ``S^[j]_m = S[m+j][m]``,
``S^[-j]_m = S^{-1}[m+j][m]``, ``alpha^(k)_m = T[m+k][m]``; entries with a
negative index are zero.
"""
from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import WrongP
from .factorization import gauss_borel
from .kernel import BandWindow, commutator, diag_mul_left, diag_mul_right, mul, transpose
from .moments import jet_moment_matrix, tau_jet
from .pearson_lf import build_psi
from .recurrence import build_pascal, build_T, dress_pascal
from .report import Report, ToleranceBudget, judge
from .series import Jet, coefficient, derivative, exp_jet

EXACT = ToleranceBudget.exact()


def _d(x, r=1):
    return derivative(x, r)


def _c0(x):
    return coefficient(x, 0)


@dataclass(eq=False)
class FactorizationJet:
    """Jet factorizations of one moment window.

    ``total`` is the order-R jet in the total Euler derivative; ``partial[a-1]``
    is the first-order jet in the derivative with respect to ``eta^(a)`` only.
    """

    R: int
    p: int
    n: int                  # reported interior
    W: int                  # working size
    ws: object
    ms: object
    f: object               # exact factorization (constant terms)
    total: object
    partial: tuple

    # derivatives of factors (exact rational windows)
    def dS(self, r=1):
        return self.total.S.map(lambda x: _d(x, r))

    def dS_tilde(self, r=1):
        return self.total.S_tilde.map(lambda x: _d(x, r))

    def dH(self, r=1):
        return [_d(h, r) for h in self.total.H]

    def phi(self, a=None):
        """``(d S) S^{-1}`` for the total derivative, or for ``eta^(a)`` only."""
        src = self.total if a is None else self.partial[a - 1]
        return _strict_lower(mul(src.S.map(_d), self.f.S_inv))

    def phi_tilde(self, a=None):
        src = self.total if a is None else self.partial[a - 1]
        return _strict_lower(mul(src.S_tilde.map(_d), self.f.S_tilde_inv))

    def dH_partial(self, a):
        return [_d(h) for h in self.partial[a - 1].H]

    # diagonals as functions with the zero convention for negative indices
    def Sd(self, j, r=0):
        """``S^[j]`` (or ``S^[-|j|]`` from ``S^{-1}``), derivative order ``r``."""
        src = self.total.S if j >= 0 else self.total.S_inv
        diag = src.diagonal(-abs(j))
        return _Seq([_d(x, r) if r else _c0(x) for x in diag])

    def Std(self, j, r=0):
        src = self.total.S_tilde if j >= 0 else self.total.S_tilde_inv
        diag = src.diagonal(-abs(j))
        return _Seq([_d(x, r) if r else _c0(x) for x in diag])

    def Hseq(self, r=0):
        return _Seq([_d(h, r) if r else _c0(h) for h in self.total.H])


class _Seq:
    """Sequence indexed from 0 with zeros at negative indices."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = list(v)

    def __getitem__(self, m):
        if m < 0:
            return mpq(0)
        return self.v[m]

    def __len__(self):
        return len(self.v)


def _strict_lower(w: BandWindow) -> BandWindow:
    rows = tuple(tuple(x if j < i else 0 for j, x in enumerate(r)) for i, r in enumerate(w.entries))
    return BandWindow(w.rows, w.cols, None, 0, rows)


def build_jet(ms, f, R: int, n: int | None = None, ws=None) -> FactorizationJet:
    """Exact jets of ``S, H, S~`` up to order R (total) and first order per weight."""
    if not 1 <= R <= 4:
        raise ValueError("jet order must be in 1..4")
    W = f.n
    one = Jet.constant(mpq(1), R)
    total = gauss_borel(jet_moment_matrix(ms, W, R).entries, one=one)
    one1 = Jet.constant(mpq(1), 1)
    partial = tuple(gauss_borel(jet_moment_matrix(ms, W, 1, weights=(a,)).entries, one=one1)
                    for a in range(1, ms.p + 1))
    ws = ms.tm.ws if ws is None else ws
    return FactorizationJet(R, ms.p, W if n is None else n, W, ws, ms, f, total, partial)


def _diff(lhs, rhs, n):
    m = min(n, lhs.rows, rhs.rows, lhs.cols, rhs.cols)
    res, locs = [], []
    for i in range(m):
        for j in range(m):
            res.append(lhs.entries[i][j] - rhs.entries[i][j])
            locs.append((i, j))
    return res, locs


# --------------------------------------------------------------------------
# splitting relations

def verify_sw_relations(jet: FactorizationJet, rd) -> Report:
    """Per weight: ``d_a H - phi^(a) H - H phi~^(a)T = T^(a)T H``; summed: the
    diagonal, subdiagonal and superdiagonal identifications."""
    p, n = jet.p, jet.n
    H = list(jet.f.H)
    rep = Report("splitting relations")
    for a in range(1, p + 1):
        dH = jet.dH_partial(a)
        phi, phit = jet.phi(a), jet.phi_tilde(a)
        size = min(phi.rows, phit.rows, rd.T_partial[a - 1].rows)
        res, locs = [], []
        Ta = rd.T_partial[a - 1]
        for i in range(min(n, size)):
            for j in range(min(n, size)):
                lhs = (dH[i] if i == j else 0) - phi.entries[i][j] * H[j] - H[i] * phit.entries[j][i]
                rhs = Ta.entries[j][i] * H[j]
                res.append(lhs - rhs)
                locs.append((i, j))
        rep.add(judge(f"s-w: d_{a} H - phi^({a}) H - H phi~^({a})T = T^({a})T H", res, EXACT, locs))
    dH = jet.dH()
    res = [dH[m] / H[m] - rd.alphas[0][m] for m in range(n)]
    rep.add(judge("S-W:d: (dH) H^-1 = alpha^(0)", res, EXACT))
    phi = jet.phi()
    res, locs = [], []
    for i in range(n):
        for j in range(i):
            k = i - j
            target = -rd.alphas[k][j] if k <= p else 0
            res.append(phi.entries[i][j] - target)
            locs.append((i, j))
    rep.add(judge("S-W:sub: -phi = sum_a (Lambda^T)^a alpha^(a)", res, EXACT, locs))
    phit = jet.phi_tilde()
    res, locs = [], []
    for i in range(n):
        for j in range(i):
            target = -H[i] / H[j] if i == j + 1 else 0
            res.append(phit.entries[i][j] - target)
            locs.append((i, j))
    rep.add(judge("S-W:super: -phi~ = Lambda^T a_- H H^-1", res, EXACT, locs))
    # the per-weight matrices add up to the total ones
    tot = jet.phi(1)
    for a in range(2, p + 1):
        tot = tot + jet.phi(a)
    res, locs = _diff(tot, phi, n)
    rep.add(judge("sum_a phi^(a) = phi", res, EXACT, locs))
    return rep


def verify_diagonal_flows(jet: FactorizationJet, rd) -> Report:
    """Flows of single diagonals of ``S``, ``S~`` and ``S~^{-1}``, and the
    recovery of ``alpha`` from the flows."""
    p, n = jet.p, jet.n
    H = jet.Hseq()
    al = rd.alphas
    rep = Report("diagonal flows")
    res = [jet.Std(1, 1)[m] + H[m + 1] / H[m] for m in range(n)]
    rep.add(judge("tS1: d S~^[1] = -a_- H H^-1", res, EXACT))
    for a in range(2, p + 2):
        res = [jet.Std(a, 1)[m] + H[m + a] / H[m + a - 1] * jet.Std(a - 1)[m] for m in range(n)]
        rep.add(judge(f"tSn: d S~^[{a}] = -(a_-^{a} H)(a_-^{a - 1} H)^-1 S~^[{a - 1}]", res, EXACT))
    res = [jet.Sd(1, 1)[m] + al[1][m] for m in range(n)]
    rep.add(judge("S1: d S^[1] = -alpha^(1)", res, EXACT))
    for a in range(2, p + 2):
        res = []
        for m in range(n):
            s = mpq(0)
            for i in range(max(0, a - p), a):
                s += al[a - i][m + i] * jet.Sd(i)[m]
            res.append(jet.Sd(a, 1)[m] + s)
        rep.add(judge(f"Sn: d S^[{a}] = -sum_i (a_-^i alpha^({a}-i)) S^[i]", res, EXACT))
    for a in range(1, p + 2):
        res = [jet.Std(-a, 1)[m] - jet.Std(-(a - 1))[m + 1] * H[m + 1] / H[m] for m in range(n)]
        rep.add(judge(f"d S~^[-{a}] = a_- S~^[{1 - a}] a_- H H^-1", res, EXACT))
    res = [al[0][m] - jet.Hseq(1)[m] / H[m] for m in range(n)]
    rep.add(judge("relRec0: alpha^(0) = (dH) H^-1", res, EXACT))
    for a in range(1, p + 2):
        res = []
        for m in range(n):
            s = jet.Sd(a, 1)[m]
            for j in range(1, a):
                s += jet.Sd(a - j, 1)[m + j] * jet.Sd(-j)[m]
            target = al[a][m] if a <= p else 0
            res.append(target + s)
        rep.add(judge(f"relRecN: alpha^({a}) = -[d S^[{a}] + sum_j (d a_-^j S^[{a}-j]) S^[-j]]",
                      res, EXACT))
    return rep


# --------------------------------------------------------------------------
# multiple Toda system

def mts_n_sides(jet: FactorizationJet, m: int, n: int):
    """Both sides of the level-m equation at site n (corrected index reading)."""
    S = jet.Sd
    lhs = S(m + 1)[n - 1] + S(-(m + 1))[n]
    for j in range(1, m + 1):
        lhs += S(m + 1 - j)[n + j - 1] * S(-j)[n]
    rhs = jet.Sd(m, 1)[n]
    for j in range(1, m):
        rhs += jet.Sd(m - j, 1)[n + j] * S(-j)[n]
    return lhs, -rhs


def mts_n_printed_sides(jet: FactorizationJet, m: int, n: int):
    """Both sides of the level-m equation exactly as typeset (for the erratum record)."""
    S = jet.Sd
    lhs = S(m + 1)[n - 1] + S(-(m + 1))[n]
    for j in range(1, m + 1):
        lhs += S(m - j)[n + j] * S(-j)[n]
    rhs = jet.Sd(m, 1)[n]
    for j in range(1, m):
        rhs += jet.Sd(m - j, 1)[m + j] * S(-j)[m]
    return lhs, -rhs


def verify_multiple_toda(jet: FactorizationJet) -> Report:
    """``d q_n = f^(1)_{n-1} - f^(1)_n``, the level-m equations for m < p, and
    ``H_{n+p}/H_n = -[d f^(p)_n + sum_j (d f^(p-j)_{n+j}) f^(-j)_n]``."""
    p, n = jet.p, jet.n
    H = jet.Hseq()
    rep = Report("multiple Toda system")
    res = [jet.Hseq(1)[k] / H[k] - (jet.Sd(1)[k - 1] - jet.Sd(1)[k]) for k in range(n)]
    rep.add(judge("MTS-0: d q_n = f^(1)_{n-1} - f^(1)_n", res, EXACT))
    for m in range(1, p):
        res = []
        for k in range(n):
            lhs, rhs = mts_n_sides(jet, m, k)
            res.append(lhs - rhs)
        rep.add(judge(f"MTS-n (m={m}): alpha^({m}) from S and S^-1 = -[d f^({m}) + ...]", res, EXACT))
    res = []
    for k in range(n):
        rhs = jet.Sd(p, 1)[k]
        for j in range(1, p):
            rhs += jet.Sd(p - j, 1)[k + j] * jet.Sd(-j)[k]
        res.append(H[k + p] / H[k] + rhs)
    rep.add(judge("MTS-q: exp(q_{n+p} - q_n) = -[d f^(p)_n + sum_j (d f^(p-j)_{n+j}) f^(-j)_n]",
                  res, EXACT))
    return rep


# --------------------------------------------------------------------------
# three weights

def _three_weight_vars(jet):
    f = [jet.total.S.diagonal(-1)]
    g = [jet.total.S.diagonal(-2)]
    k = [jet.total.S.diagonal(-3)]
    return _JSeq(f[0]), _JSeq(g[0]), _JSeq(k[0])


class _JSeq:
    """Jet-valued sequence with zero jets at negative indices."""

    def __init__(self, v):
        self.v = list(v)
        self.R = v[0].order if v and isinstance(v[0], Jet) else 0

    def __getitem__(self, m):
        if m < 0:
            return Jet.constant(mpq(0), self.R)
        return self.v[m]


def three_p2_rhs(f, g, k, n):
    """Right side of the derived second equation (as jets)."""
    return (k[n] - k[n - 1] - g[n + 1] * f[n] - f[n + 2] * g[n] + f[n] * f[n + 1] * f[n + 2]
            + f[n] * g[n] + f[n + 1] * g[n] - f[n + 1] * f[n + 1] * f[n])


def three_p2_printed_rhs(f, g, k, n):
    return (k[n] - g[n + 1] * f[n] - f[n + 2] * g[n] + f[n] * f[n + 1] * f[n + 2] - k[n - 1]
            + f[n] * f[n + 2] + g[n] - f[n] * f[n + 1])


def three_p2p3_sides(jet, n, printed=False):
    """Both sides of the k-free second-order equation at site n.

    The derived reading differentiates the derived second equation and
    eliminates ``d k`` with the third one; the printed reading is evaluated
    verbatim.
    """
    f, g, k = _three_weight_vars(jet)
    H = jet.Hseq()
    d, d2 = _d, (lambda x: _d(x, 2))
    E = lambda j: H[j + 3] / H[j] if j >= 0 else mpq(0)      # noqa: E731
    c = _c0
    if printed:
        lhs = d2(g[n]) - d2(f[n + 1]) * c(f[n]) - d(f[n + 1]) * d(f[n])
        rhs = (H[n + 2] / H[n - 1] if n >= 1 else mpq(0)) - E(n) - d(f[n]) * c(g[n + 1]) \
            - c(f[n + 2]) * d(g[n]) + d(f[n]) * c(f[n + 1]) * c(f[n + 2]) \
            + c(f[n]) * d(f[n + 1]) * c(f[n + 2]) - d(g[n]) * c(f[n - 1]) \
            + d(f[n + 1]) * (c(f[n - 1]) * c(f[n]) - c(g[n - 1])) + d(f[n]) * c(f[n + 2]) \
            + d(g[n]) + c(f[n]) * d(f[n + 2]) - c(f[n + 1]) * d(f[n]) - c(f[n]) * d(f[n + 1])
        return lhs, rhs

    def dk(j):
        # d k_j from the third equation
        if j < 0:
            return mpq(0)
        return -E(j) + d(g[j + 1]) * c(f[j]) + d(f[j + 2]) * (c(g[j]) - c(f[j]) * c(f[j + 1]))

    lhs = d2(g[n]) - d2(f[n + 1]) * c(f[n]) - d(f[n + 1]) * d(f[n])
    rest = (- g[n + 1] * f[n] - f[n + 2] * g[n] + f[n] * f[n + 1] * f[n + 2]
            + f[n] * g[n] + f[n + 1] * g[n] - f[n + 1] * f[n + 1] * f[n])
    rhs = dk(n) - dk(n - 1) + d(rest)
    return lhs, rhs


def tau_relations(ms, jet: FactorizationJet, n_max: int) -> Report:
    """``f_n = -d tau_{n+1} / tau_{n+1}``, the summed form of ``g_n`` and its
    derivative, with tau derivatives from column-bump determinants."""
    rep = Report("tau relations")
    taus = {j: tau_jet(ms, j, 3) for j in range(1, n_max + 3)}
    f = jet.Sd(1)
    res = [f[m] + taus[m + 1][1] / taus[m + 1][0] for m in range(n_max)]
    rep.add(judge("tauf: f_n = -d tau_{n+1} / tau_{n+1}", res, EXACT))
    H = jet.Hseq()
    res = []
    for m in range(n_max):
        res.append(H[m] - taus[m + 1][0] / (taus[m][0] if m else 1))
    rep.add(judge("tauq: H_n = tau_{n+1} / tau_n", res, EXACT))
    g, dg = jet.Sd(2), jet.Sd(2, 1)

    def term(j):
        t1, t2 = taus[j + 1], taus[j + 2]
        return t1[1] * t2[1] / (t1[0] * t2[0]) - t1[2] / t1[0]

    def dterm(j):
        t1, t2 = taus[j + 1], taus[j + 2]
        return ((t1[2] * t2[1] + t1[1] * t2[2]) / (t1[0] * t2[0])
                - t1[1] ** 2 * t2[1] / (t2[0] * t1[0] ** 2)
                - t2[1] ** 2 * t1[1] / (t1[0] * t2[0] ** 2)
                - t1[3] / t1[0] + t1[2] * t1[1] / t1[0] ** 2)

    res, dres = [], []
    acc, dacc = g[0], dg[0]
    for m in range(n_max):
        if m > 0:
            acc += term(m)
            dacc += dterm(m)
        res.append(g[m] - acc)
        dres.append(dg[m] - dacc)
    rep.add(judge("gn: g_n = g_0 + sum_j (d tau_{j+1} d tau_{j+2} / tau_{j+1} tau_{j+2} "
                  "- d^2 tau_{j+1} / tau_{j+1})", res, EXACT))
    rep.add(judge("dergn: d g_n = d g_0 + sum_j (...), last term over tau_{j+1}^2", dres, EXACT))
    return rep


def verify_three_weight_system(jet: FactorizationJet, ms=None) -> Report:
    """The p = 3 specialization in the variables ``q, f = S^[1], g = S^[2], k = S^[3]``."""
    if jet.p != 3:
        raise WrongP(f"the three-weight system needs p = 3, got p = {jet.p}")
    n = jet.n
    f, g, k = _three_weight_vars(jet)
    H = jet.Hseq()
    c, d = _c0, _d
    rep = Report("three-weight system")
    res = [jet.Hseq(1)[m] / H[m] - (c(f[m - 1]) - c(f[m])) for m in range(n)]
    rep.add(judge("3p0: d q_n = f_{n-1} - f_n", res, EXACT))
    res = [d(f[m]) - (c(g[m]) - c(g[m - 1]) + c(f[m]) * (c(f[m]) - c(f[m + 1]))) for m in range(n)]
    rep.add(judge("3p1: d f_n = g_n - g_{n-1} + f_n (f_n - f_{n+1})", res, EXACT))
    res = [d(g[m]) - d(f[m + 1]) * c(f[m]) - c(three_p2_rhs(f, g, k, m)) for m in range(n)]
    rep.add(judge("3p2: d g_n - (d f_{n+1}) f_n = k_n - k_{n-1} - g_{n+1} f_n - f_{n+2} g_n "
                  "+ f_n f_{n+1} f_{n+2} + f_n g_n + f_{n+1} g_n - f_{n+1}^2 f_n", res, EXACT))
    res = [H[m + 3] / H[m] - (-d(k[m]) + d(g[m + 1]) * c(f[m])
                              + d(f[m + 2]) * (c(g[m]) - c(f[m]) * c(f[m + 1]))) for m in range(n)]
    rep.add(judge("3p3: exp(q_{n+3} - q_n) = -d k_n + (d g_{n+1}) f_n + (d f_{n+2})(g_n - f_n f_{n+1})",
                  res, EXACT))
    if jet.R >= 2:
        res = []
        for m in range(n):
            lhs, rhs = three_p2p3_sides(jet, m)
            res.append(lhs - rhs)
        rep.add(judge("3p2p3: second-order equation without k", res, EXACT))
    if ms is not None:
        rep.add(tau_relations(ms, jet, min(n, 6)))
    return rep


# --------------------------------------------------------------------------
# alpha-Toda, Lax and the compatibility of Psi with the flow

def jet_recurrence(jet: FactorizationJet):
    return build_T(jet.total, jet.p)


def verify_alpha_toda_and_lax(jet: FactorizationJet, rd, rdj=None) -> Report:
    p, n = jet.p, jet.n
    rdj = jet_recurrence(jet) if rdj is None else rdj
    al = rd.alphas
    dal = [[_d(x) for x in row] for row in rdj.alphas]
    rep = Report("alpha-Toda and Lax")

    def A(k, m):
        if k > p or m < 0:
            return mpq(0)
        return al[k][m]

    for k in range(p + 1):
        res = []
        for m in range(n):
            rhs = A(k + 1, m) - A(k + 1, m - 1)
            if k > 0:
                rhs += A(k, m) * (A(0, m + k) - A(0, m))
            res.append(dal[k][m] - rhs)
        rep.add(judge(f"d alpha^({k}) = alpha^({k + 1}) - a_+ alpha^({k + 1})"
                      + (f" + alpha^({k})(a_-^{k} alpha^(0) - alpha^(0))" if k else ""), res, EXACT))
    dT = rdj.T.map(_d)
    phi = jet.phi()
    lax = commutator(phi.leading(min(phi.rows, rd.T.rows)), rd.T.leading(min(phi.rows, rd.T.rows)))
    res, locs = _diff(dT, lax, n)
    rep.add(judge("Lax: d T = [phi, T]", res, EXACT, locs))
    size = rd.T.rows
    Tplus = BandWindow(size, size, 0, 1, tuple(
        tuple(rd.T.entries[i][j] if j >= i else 0 for j in range(size)) for i in range(size)))
    res, locs = _diff(dT, commutator(Tplus, rd.T), n)
    rep.add(judge("Lax: d T = [T_+, T], T_+ = Lambda + alpha^(0)", res, EXACT, locs))
    return rep


def build_psi_jet(jet: FactorizationJet, rdj=None):
    """Psi by both routes with jet entries; the right route sees ``eta`` as ``eta e^eps``."""
    rdj = jet_recurrence(jet) if rdj is None else rdj
    pdj = dress_pascal(jet.total, build_pascal(jet.p, jet.W))
    etas = [exp_jet(s.eta, jet.R) for s in jet.ws.sigmas]
    return build_psi(rdj, pdj, jet.ws, jet.n, eta_scalars=etas)


def verify_psi_flow(jet: FactorizationJet, lf, lfj=None) -> Report:
    """``d Psi = [phi, Psi]`` on the left route and
    ``d Psi^T = [mu, Psi^T] + Psi^T`` on the right route."""
    n = jet.n
    lfj = build_psi_jet(jet) if lfj is None else lfj
    rep = Report("Psi flow")
    phi = jet.phi()
    PsiL = lf.Psi_left
    m = min(phi.rows, PsiL.rows)
    rhs = commutator(phi.leading(m), PsiL.leading(m))
    res, locs = _diff(lfj.Psi_left.map(_d), rhs, n)
    rep.add(judge("comp2a: d Psi = [phi, Psi] (left route)", res, EXACT, locs))
    H = list(jet.f.H)
    dH = jet.dH()
    phit = jet.phi_tilde()
    mu = diag_mul_right(diag_mul_left([1 / h for h in H], phit), H)
    mu_entries = [list(r) for r in mu.entries]
    for i in range(len(mu_entries)):
        mu_entries[i][i] = mu_entries[i][i] - dH[i] / H[i]
    mu = BandWindow(mu.rows, mu.cols, None, 0, tuple(tuple(r) for r in mu_entries))
    PsiRt = transpose(lf.Psi_right)
    m = min(mu.rows, PsiRt.rows)
    rhs = commutator(mu.leading(m), PsiRt.leading(m)) + PsiRt.leading(m)
    res, locs = _diff(transpose(lfj.Psi_right.map(_d)), rhs, n)
    rep.add(judge("comp2b: d Psi^T = [mu, Psi^T] + Psi^T (right route)", res, EXACT, locs))
    return rep


# --------------------------------------------------------------------------
# derivative routes for tau

def tau_from_jet(jet: FactorizationJet, n: int):
    """``tau_n = H_0 ... H_{n-1}`` as a jet of the total Euler derivative."""
    acc = Jet.constant(mpq(1), jet.R)
    for h in jet.total.H[:n]:
        acc = acc * h
    return acc


def verify_tau_routes(ms, jet: FactorizationJet, n_max: int, r_max: int | None = None,
                      budget=EXACT) -> Report:
    """Column-bump determinants against derivatives of the product of jet pivots."""
    r_max = jet.R if r_max is None else min(r_max, jet.R)
    rep = Report("tau derivative routes")
    for r in range(r_max + 1):
        res, locs = [], []
        for n in range(1, min(n_max, jet.W) + 1):
            res.append(tau_jet(ms, n, r)[r] - _d(tau_from_jet(jet, n), r))
            locs.append(n)
        rep.add(judge(f"tau_jet = d^{r}(H_0 ... H_(n-1))", res, budget, locs))
    return rep


def scale_eta(ws, factor):
    """Weight system with every ``eta^(a)`` multiplied by ``factor``."""
    from .weights import PearsonSigma, WeightSystem
    return WeightSystem(ws.p, ws.c, tuple(PearsonSigma(s.eta * factor, s.b) for s in ws.sigmas))


def finite_difference_taus(ws, tm, n_max: int, eps):
    """Central differences ``(tau(eta(1+eps)) - tau(eta(1-eps))) / (2 eps)`` at fixed truncation."""
    from .moments import build_moments, moment_matrix
    from .weights import truncate_measure
    out = []
    sides = []
    for sign in (1, -1):
        ws_s = scale_eta(ws, 1 + sign * eps)
        tm_s = truncate_measure(ws_s, tm.m_max, tm.tail_bound, K=tm.K)
        f = gauss_borel(moment_matrix(build_moments(tm_s), n_max))
        taus, acc = [], mpq(1)
        for h in f.H:
            acc *= h
            taus.append(acc)
        sides.append(taus)
    for n in range(n_max):
        out.append((sides[0][n] - sides[1][n]) / (2 * eps))
    return out


def verify_finite_differences(ws, tm, jet: FactorizationJet, n_max: int, eps=mpq(1, 10 ** 6),
                              rel_tol=mpq(1, 10 ** 4)) -> Report:
    """First-order jets of ``tau_1 .. tau_n`` against exact-rational central differences.

    The residual reported is the relative deviation; the check passes when it
    stays below ``rel_tol``.
    """
    fd = finite_difference_taus(ws, tm, n_max, eps)
    res, locs = [], []
    for n in range(1, n_max + 1):
        exact_d = _d(tau_from_jet(jet, n))
        res.append(abs(fd[n - 1] - exact_d) / abs(exact_d) if exact_d != 0 else abs(fd[n - 1]))
        locs.append(n)
    budget = ToleranceBudget.tail(rel_tol, 1)
    rep = Report("finite differences")
    rep.add(judge(f"central difference at eps={eps} vs d tau_n", res, budget, locs))
    return rep


__all__ = ["FactorizationJet", "build_jet", "verify_sw_relations", "verify_diagonal_flows",
           "verify_multiple_toda", "verify_three_weight_system", "verify_alpha_toda_and_lax",
           "build_psi_jet", "verify_psi_flow", "tau_relations", "mts_n_sides", "mts_n_printed_sides",
           "three_p2p3_sides", "jet_recurrence", "tau_from_jet", "verify_tau_routes", "scale_eta",
           "finite_difference_taus", "verify_finite_differences"]
