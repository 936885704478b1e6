"""Parameter shifts of the weights and the connection matrices they induce.

A b-shift moves ``b_i^(a) -> b_i^(a) + 1`` in one weight; a c-shift moves
``c_j -> c_j - 1`` in every weight. Termwise

    (k + b) w(k; b) = b w(k; b + 1),    (k + c - 1) w(k; c) = (c - 1) w(k; c - 1),

so at a common truncation index the moment relations, the connection
matrices and everything derived from them are exact.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import IndexOutOfRange, TruncationMismatch
from .kernel import (BandWindow, add_identity, diag_mul_left, diag_mul_right, fmt,
                     mul, shift, transpose)
from .opsys import poly_add, poly_mul, trim, type_I_system
from .pipeline import DEFAULT_TAIL, certified_K, run_pipeline, working_size
from .recurrence import partial_shift
from .report import Report, ToleranceBudget, judge, skipped
from .weights import PearsonSigma, make_weight_system


@dataclass(frozen=True)
class ShiftDescriptor:
    """``kind`` is ``"b"`` (weight ``a``, parameter ``i``) or ``"c"`` (parameter ``j``)."""

    kind: str
    a: int = 0
    i: int = 0
    j: int = 0

    @classmethod
    def b(cls, a, i):
        return cls("b", a=a, i=i)

    @classmethod
    def c(cls, j):
        return cls("c", j=j)

    @classmethod
    def parse(cls, text: str) -> "ShiftDescriptor":
        """``"b:a=1,i=1"`` or ``"c:j=1"``."""
        m = re.fullmatch(r"\s*([bc])\s*:\s*(.*)", text)
        if not m:
            raise ValueError(f"bad shift descriptor {text!r}")
        fields = {}
        for part in m.group(2).split(","):
            if not part.strip():
                continue
            k, _, v = part.partition("=")
            fields[k.strip()] = int(v)
        if m.group(1) == "b":
            if set(fields) != {"a", "i"}:
                raise ValueError(f"b-shift needs a= and i=: {text!r}")
            return cls.b(fields["a"], fields["i"])
        if set(fields) != {"j"}:
            raise ValueError(f"c-shift needs j=: {text!r}")
        return cls.c(fields["j"])

    def __str__(self):
        return f"b:a={self.a},i={self.i}" if self.kind == "b" else f"c:j={self.j}"

    def prefactor(self, ws):
        """``b_i^(a)`` for a b-shift, ``c_j - 1`` for a c-shift (values before the shift)."""
        if self.kind == "b":
            return ws.sigmas[self.a - 1].b[self.i - 1]
        return ws.c[self.j - 1] - 1

    def validate(self, ws):
        if self.kind == "b":
            if not 1 <= self.a <= ws.p:
                raise IndexOutOfRange(f"weight {self.a} outside 1..{ws.p}")
            if not 1 <= self.i <= ws.M(self.a):
                raise IndexOutOfRange(f"b_{self.i} of weight {self.a} does not exist")
        elif self.kind == "c":
            if not 1 <= self.j <= ws.N:
                raise IndexOutOfRange(f"c_{self.j} does not exist (N={ws.N})")
        else:
            raise ValueError(f"unknown shift kind {self.kind!r}")


def apply_shift(ws, sd: ShiftDescriptor):
    """The weight system with the single parameter moved (fresh validation)."""
    sd.validate(ws)
    if sd.kind == "b":
        sigmas = list(ws.sigmas)
        s = sigmas[sd.a - 1]
        b = list(s.b)
        b[sd.i - 1] = b[sd.i - 1] + 1
        sigmas[sd.a - 1] = PearsonSigma(s.eta, tuple(b))
        return make_weight_system(ws.p, ws.c, sigmas)
    c = list(ws.c)
    c[sd.j - 1] = c[sd.j - 1] - 1
    return make_weight_system(ws.p, c, ws.sigmas)


# --------------------------------------------------------------------------
# moments

def moment_shift_check(ms, shifted_ms, sd: ShiftDescriptor, size: int) -> Report:
    """``(theta_a + b) M = b Theta M`` (b-shift, weight-a columns bumped) or
    ``(theta + c - 1) M = (c - 1) Theta M`` (c-shift, all columns bumped)."""
    rep = Report("moment shift")
    name = f"{'hypRelM1' if sd.kind == 'b' else 'hypRelM2'}: moment shift {sd}"
    if ms.K != shifted_ms.K:
        raise TruncationMismatch(f"K={ms.K} vs shifted K={shifted_ms.K}")
    ws = ms.tm.ws
    d = sd.prefactor(ws)
    if sd.kind == "b" and d == 0:
        rep.add(skipped(name, "b = 0 makes both sides degenerate"))
        return rep
    res, locs = [], []
    p = ms.p
    for i in range(size):
        for j in range(size):
            bumped = sd.kind == "c" or j % p + 1 == sd.a
            lhs = d * ms.entry(i, j)
            if bumped:
                lhs += ms.entry(i, j, 1)
                rhs = d * shifted_ms.entry(i, j)
            else:
                rhs = d * shifted_ms.entry(i, j) if sd.kind == "b" else None
            if rhs is None:
                continue
            res.append(lhs - rhs)
            locs.append((i, j))
    rep.add(judge(name, res, ToleranceBudget.exact(), locs))
    return rep


# --------------------------------------------------------------------------
# connection matrices

@dataclass(frozen=True, eq=False)
class ConnectionPair:
    omega: BandWindow      # upper, p superdiagonals
    Omega: BandWindow      # unit lower, p subdiagonals
    shift: ShiftDescriptor
    prefactor: object
    p: int


def _lambda_plus(sd, p, n, d):
    base = partial_shift(n, p, sd.a) if sd.kind == "b" else shift(n, p)
    return add_identity(base, d)


def build_connection(f, shifted_f, sd: ShiftDescriptor, ws) -> ConnectionPair:
    """``omega = (Theta H)^-1 (Theta S~) (Lambda_shift + d) S~^-1 H`` and ``Omega = S (Theta S)^-1``."""
    p = ws.p
    d = sd.prefactor(ws)
    n = min(f.n, shifted_f.n)
    core = mul(_lambda_plus(sd, p, n, d), diag_mul_right(f.S_tilde_inv.leading(n), list(f.H)))
    left = diag_mul_left([1 / h for h in shifted_f.H], shifted_f.S_tilde.leading(n))
    omega = mul(left, core)
    Omega = mul(f.S.leading(n), shifted_f.S_inv.leading(n))
    return ConnectionPair(omega, Omega, sd, d, p)


def _poly_rows(M: BandWindow, polys, rows):
    out = []
    for i in range(rows):
        acc = []
        for j, x in enumerate(M.entries[i]):
            if x != 0 and j < len(polys):
                acc = poly_add(acc, [x * c for c in polys[j]])
        out.append(trim(acc))
    return out


def verify_connection(cp: ConnectionPair, f, shifted_f, n: int) -> Report:
    """Transpose relation, band profiles, the top diagonal of omega, and the
    actions ``omega A^(a') = (x delta + d) Theta A^(a')`` and ``Omega Theta B = B``."""
    sd, p, d = cp.shift, cp.p, cp.prefactor
    exact = ToleranceBudget.exact()
    rep = Report(f"connection {sd}")
    n = min(n, cp.omega.rows, cp.Omega.rows)
    res, locs = [], []
    for i in range(n):
        for j in range(n):
            res.append(cp.omega.entries[j][i] - d * cp.Omega.entries[i][j])
            locs.append((i, j))
    tag = "connRel1" if sd.kind == "b" else "connRel2"
    rep.add(judge(f"{tag}: omega^T = {fmt(d)} Omega", res, exact, locs))
    res, locs = [], []
    for i in range(n):
        res.append(cp.Omega.entries[i][i] - 1)
        locs.append(("diag", i))
        for j in range(n):
            if i - j > p or j > i:
                res.append(cp.Omega.entries[i][j])
                locs.append(("Omega", i, j))
            if j - i > p or i > j:
                res.append(cp.omega.entries[i][j])
                locs.append(("omega", i, j))
    rep.add(judge(f"connEst: Omega unit lower with {p} subdiagonals, omega upper with {p} superdiagonals",
                  res, exact, locs))
    res, locs = [], []
    for m in range(n - p):
        on = sd.kind == "c" or m % p == sd.a - 1
        target = f.H[m + p] / shifted_f.H[m] if on else 0
        res.append(cp.omega.entries[m][m + p] - target)
        locs.append(m)
    rep.add(judge("connEst: omega^[p] = I^(a) a_-^p H (Theta H)^-1", res, exact, locs))
    res, locs = [], []
    for m in range(n):
        res.append(cp.omega.entries[m][m] - d)
        locs.append(m)
    rep.add(judge(f"connEst: diag omega = {fmt(d)}", res, exact, locs))
    # polynomial actions
    B = [list(f.S.entries[k][: k + 1]) for k in range(f.n)]
    tB = [list(shifted_f.S.entries[k][: k + 1]) for k in range(shifted_f.n)]
    res, locs = [], []
    for i, poly in enumerate(_poly_rows(cp.Omega, tB, n)):
        for k, r in enumerate(poly_add(poly, B[i], -1)):
            res.append(r)
            locs.append((i, k))
    rep.add(judge("co-v: Omega Theta B = B", res, exact, locs))
    rows = n - p
    for a in range(1, p + 1):
        A = [list(type_I_system(f, p, k).polys[a - 1].coeffs) for k in range(f.n)]
        tA = [list(type_I_system(shifted_f, p, k).polys[a - 1].coeffs) for k in range(shifted_f.n)]
        factor = [d, 1] if (sd.kind == "c" or a == sd.a) else [d]
        res, locs = [], []
        for i, poly in enumerate(_poly_rows(cp.omega, A, rows)):
            for k, r in enumerate(poly_add(poly, poly_mul(factor, tA[i]), -1)):
                res.append(r)
                locs.append((i, k))
        label = "(x + d)" if len(factor) == 2 else "d"
        rep.add(judge(f"co-v: omega A^({a}) = {label} Theta A^({a})", res, exact, locs))
    return rep


def shift_check(ws, sd: ShiftDescriptor, n: int, target_tail=DEFAULT_TAIL) -> Report:
    """Moment relation and connection checks for one shift at a common K."""
    tws = apply_shift(ws, sd)
    K = max(certified_K(ws, n, target_tail, 1), certified_K(tws, n, target_tail, 1))
    base = run_pipeline(ws, n, target_tail, K=K, jet_order=1)
    moved = run_pipeline(tws, n, target_tail, K=K, jet_order=1, W=base.W)
    rep = Report(f"shift {sd}")
    rep.add(moment_shift_check(base.ms, moved.ms, sd, n))
    cp = build_connection(base.f, moved.f, sd, ws)
    rep.add(verify_connection(cp, base.f, moved.f, n))
    return rep


# --------------------------------------------------------------------------
# discrete compatibility

def _corner_key(shifts):
    return tuple(sorted(str(s) for s in shifts))


def discrete_compatibility(ws, r: ShiftDescriptor, s: ShiftDescriptor, q: ShiftDescriptor | None,
                           n: int, target_tail=DEFAULT_TAIL) -> Report:
    """Commuting-square identities for connection matrices and their intertwining with T.

    ``Omega^(s) Omega^(r)|_s = Omega^(r) Omega^(s)|_r`` (and the pairs with q),
    the same for omega, ``T Omega = Omega T|_shifted`` and
    ``T|_shifted^T omega = omega T^T``.
    """
    shifts = [x for x in (r, s, q) if x is not None]
    pairs = [(x, y) for x, y in [(s, r), (s, q), (r, q)] if x is not None and y is not None]
    corners = {(): ws}
    for x in shifts:
        corners.setdefault((str(x),), apply_shift(ws, x))
    for x, y in pairs:
        # a repeated shift needs the corner moved twice by the same parameter
        for u, v in ((x, y), (y, x)):
            key = _corner_key([str(u), str(v)])
            if key not in corners:
                corners[key] = apply_shift(corners[(str(u),)], v)
    K = max(certified_K(sys, n, target_tail) for sys in corners.values())
    W = max(working_size(sys, n) for sys in corners.values())
    pipes = {key: run_pipeline(sys, n, target_tail, K=K, W=W) for key, sys in corners.items()}
    exact = ToleranceBudget.exact()
    rep = Report("discrete compatibility")

    def conn(key, x):
        src = pipes[key]
        dst = pipes[_corner_key(list(key) + [str(x)])]
        return build_connection(src.f, dst.f, x, src.ws)

    names = {str(r): "r", str(s): "s"}
    if q is not None:
        names[str(q)] = "q"
    for x, y in pairs:
        nx, ny = names[str(x)], names[str(y)]
        cx, cy = conn((), x), conn((), y)
        cxy, cyx = conn((str(x),), y), conn((str(y),), x)
        lhs, rhs = mul(cx.Omega, cxy.Omega), mul(cy.Omega, cyx.Omega)
        m = min(lhs.rows, rhs.rows, n)
        res = [lhs.entries[i][j] - rhs.entries[i][j] for i in range(m) for j in range(m)]
        rep.add(judge(f"comp{nx}{ny}: Omega^({nx}) Omega^({ny})|_{nx} = "
                      f"Omega^({ny}) Omega^({nx})|_{ny}", res, exact))
        # omega acts on type I vectors, so the composition runs the other way
        lhs, rhs = mul(cxy.omega, cx.omega), mul(cyx.omega, cy.omega)
        m = min(lhs.rows, rhs.rows, n)
        res = [lhs.entries[i][j] - rhs.entries[i][j] for i in range(m) for j in range(m)]
        rep.add(judge(f"comp{nx}{ny}: omega^({ny})|_{nx} omega^({nx}) = "
                      f"omega^({nx})|_{ny} omega^({ny})", res, exact))
    for x in shifts:
        nx = names[str(x)]
        cp = conn((), x)
        T = pipes[()].rd.T
        Th = pipes[(str(x),)].rd.T
        lhs = mul(T, cp.Omega)
        rhs = mul(cp.Omega, Th)
        m = min(lhs.rows, rhs.rows, n)
        res = [lhs.entries[i][j] - rhs.entries[i][j] for i in range(m) for j in range(m)]
        rep.add(judge(f"T Omega^({nx}) = Omega^({nx}) T|_{nx}", res, exact))
        lhs = mul(transpose(Th), cp.omega)
        rhs = mul(cp.omega, transpose(T))
        m = min(lhs.rows, rhs.rows, n)
        res = [lhs.entries[i][j] - rhs.entries[i][j] for i in range(m) for j in range(m)]
        rep.add(judge(f"compJo{nx}: T|_{nx}^T omega^({nx}) = omega^({nx}) T^T", res, exact))
    return rep


__all__ = ["ShiftDescriptor", "apply_shift", "moment_shift_check", "ConnectionPair",
           "build_connection", "verify_connection", "shift_check", "discrete_compatibility"]
