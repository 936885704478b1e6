"""The four named families: constructors, closed forms and Laguerre-Freud laws.

Coefficient laws are written against two index conventions for the
subdiagonals of T:

* ``col``: ``alpha^(k)_n = T[n+k][n]`` (the package convention),
* ``row``: ``alpha^(k)_n = T[n][n-k]``.

Each law is a list of readings. A reading evaluates one candidate form of the
law on factorization alphas; the law is validated when at least one reading
stays inside the budget. Readings named ``printed/...`` are the displayed
formulas taken literally; ``corrected/...`` readings differ from them by a
named substitution; the ``derived`` reading is the corresponding diagonal of
``[Psi, T] = Psi`` with the family's closed-form psi diagonals substituted.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

from gmpy2 import mpq

from .errors import InvalidParameters, WindowTooSmall, WrongKind
from .kernel import Q, ToleranceBudget, fmt, max_abs
from .report import FAIL, PASS, Check, Report, judge, skipped
from .weights import PearsonSigma, make_weight_system

KINDS = ("charlier", "gen-charlier", "meixner2", "gen-meixner2")
_ALIASES = {
    "multiplecharlier": "charlier", "multiple-charlier": "charlier",
    "generalizedcharlier": "gen-charlier", "generalized-charlier": "gen-charlier",
    "meixnerii": "meixner2", "meixner-ii": "meixner2",
    "generalizedmeixnerii": "gen-meixner2", "generalized-meixner2": "gen-meixner2",
}


# --------------------------------------------------------------------------
# specification and weight system

@dataclass(frozen=True)
class FamilySpec:
    kind: str
    p: int
    eta: tuple = ()          # per-weight etas (Charlier kinds) or one shared eta (Meixner kinds)
    c: mpq | None = None
    b: tuple = ()

    def __post_init__(self):
        kind = _ALIASES.get(self.kind.lower(), self.kind.lower())
        object.__setattr__(self, "kind", kind)
        eta = self.eta if isinstance(self.eta, (tuple, list)) else (self.eta,)
        object.__setattr__(self, "eta", tuple(Q(e) for e in eta))
        object.__setattr__(self, "b", tuple(Q(x) for x in self.b))
        if self.c is not None:
            object.__setattr__(self, "c", Q(self.c))

    @property
    def generalized(self):
        return self.kind.startswith("gen-")

    @property
    def meixner(self):
        return self.kind.endswith("meixner2")

    @property
    def shared_eta(self):
        return self.eta[0]

    def eta_of(self, a):
        """``eta^(a)`` for ``a`` in 1..p, read cyclically."""
        return self.eta[(a - 1) % self.p]

    def b_of(self, i):
        """``b_i`` read cyclically, so ``b_0 = b_p`` and ``b_{p+1} = b_1``."""
        return self.b[(i - 1) % self.p]

    def to_dict(self):
        d = {"kind": self.kind, "p": self.p}
        if self.c is not None:
            d["c"] = fmt(self.c)
        if self.meixner:
            d["b"] = [fmt(x) for x in self.b]
            d["eta"] = fmt(self.shared_eta)
        else:
            d["eta"] = [fmt(e) for e in self.eta]
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], int(d["p"]), d.get("eta", ()), d.get("c"), tuple(d.get("b", ())))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def validate_family(fs: FamilySpec):
    if fs.kind not in KINDS:
        raise InvalidParameters(f"unknown family kind {fs.kind!r}")
    if fs.p < 1:
        raise InvalidParameters("p must be >= 1")
    if fs.generalized:
        if fs.c is None:
            raise InvalidParameters(f"{fs.kind} needs c")
        if fs.c + 1 <= 0 and fs.c == int(fs.c):
            raise InvalidParameters(f"c = {fmt(fs.c)} makes (c+1)_k vanish")
    elif fs.c is not None:
        raise InvalidParameters(f"{fs.kind} takes no c")
    if fs.meixner:
        if len(fs.eta) != 1:
            raise InvalidParameters("Meixner II families share one eta")
        if not abs(fs.shared_eta) < 1:
            raise InvalidParameters(f"Meixner II needs |eta| < 1, got {fmt(fs.shared_eta)}")
        if fs.shared_eta == 0:
            raise InvalidParameters("eta must be nonzero")
        if len(fs.b) != fs.p:
            raise InvalidParameters(f"expected {fs.p} b values, got {len(fs.b)}")
        if len(set(fs.b)) != fs.p:
            raise InvalidParameters("b values must be distinct")
        if any(x <= 0 and x == int(x) for x in fs.b):
            raise InvalidParameters("b values must not be nonpositive integers")
    else:
        if fs.b:
            raise InvalidParameters(f"{fs.kind} takes no b")
        if len(fs.eta) != fs.p:
            raise InvalidParameters(f"expected {fs.p} eta values, got {len(fs.eta)}")
        if any(e == 0 for e in fs.eta):
            raise InvalidParameters("eta values must be nonzero")
        if len(set(fs.eta)) != fs.p:
            raise InvalidParameters("eta values must be distinct")


def family_to_weight_system(fs: FamilySpec):
    """Pearson data: ``theta = k`` or ``k(k+c)``; ``sigma_a = eta^(a)`` or ``eta (k + b_a)``."""
    validate_family(fs)
    c = [fs.c + 1] if fs.generalized else []
    if fs.meixner:
        sigmas = [PearsonSigma(fs.shared_eta, (ba,)) for ba in fs.b]
    else:
        sigmas = [PearsonSigma(e) for e in fs.eta]
    return make_weight_system(fs.p, c, sigmas)


def r_index(n: int, p: int) -> int:
    """Representative of ``n`` mod ``p`` in ``{1, ..., p}``."""
    return (n - 1) % p + 1


# --------------------------------------------------------------------------
# alpha access

class AlphaView:
    """``A(k, n)`` in one of the two conventions, with semi-infinite boundary values.

    ``A(-1, n) = 1`` (the unit superdiagonal), subdiagonals beyond ``p`` and
    entries with a negative row or column vanish. Entries at or beyond
    ``limit`` raise ``IndexError`` so callers can skip them.
    """

    def __init__(self, alphas, p, conv="col", limit=None, overrides=None):
        self.alphas = alphas
        self.p = p
        self.conv = conv
        self.limit = limit if limit is not None else len(alphas[0]) - 1
        self.overrides = overrides or {}

    def col_entry(self, k, j):
        if k == -1:
            return mpq(1) if j >= 1 else mpq(0)
        if k < -1 or k > self.p or j < 0 or j + k < 0:
            return mpq(0)
        if j + k >= self.limit:
            raise IndexError((k, j))
        if (k, j) in self.overrides:
            return self.overrides[(k, j)]
        return self.alphas[k][j]

    def __call__(self, k, n):
        return self.col_entry(k, n if self.conv == "col" else n - k)

    def with_overrides(self, overrides):
        return AlphaView(self.alphas, self.p, self.conv, self.limit, overrides)


# --------------------------------------------------------------------------
# closed-form psi diagonals and the generic compatibility diagonal

def _proj_eta(fs, n):
    return fs.eta_of(n % fs.p + 1)


def _u(fs, A, n):
    """Superdiagonal 1 of ``Psi`` for ``theta = k(k+c)``."""
    return A(0, n) + A(0, n + 1) + fs.c - n


def _v(fs, A, n):
    """Main diagonal of ``Psi`` for ``sigma_a = eta (k + b_a)``."""
    return fs.shared_eta * (A(0, n) + fs.b_of(n % fs.p + 1) + n // fs.p)


def psi_model(fs: FamilySpec):
    """``(sub, sup, psi)`` with ``psi(j, n, A)`` the closed-form diagonal ``j`` at index ``n``.

    Diagonals are column indexed like ``T``: ``Psi[n][n+j]`` for ``j >= 0`` and
    ``Psi[n-j][n]`` for ``j < 0``.
    """
    p = fs.p
    sup = 2 if fs.generalized else 1
    sub = p if fs.meixner else 0

    def psi(j, n, A):
        if j == sup:
            return mpq(1)
        if j == 1:
            return _u(fs, A, n)
        if j == 0:
            return _v(fs, A, n) if fs.meixner else _proj_eta(fs, n)
        if -sub <= j < 0:
            return fs.shared_eta * A(-j, n)
        return mpq(0)

    return sub, sup, psi


def compatibility_diagonal(fs: FamilySpec, A: AlphaView, d: int, s: int):
    """Entry ``[s+d][s]`` of ``[Psi, T] - Psi`` with ``Psi`` from :func:`psi_model`."""
    sub, sup, psi = psi_model(fs)
    p = fs.p

    def P(i, k):
        j = k - i
        if j > sup or j < -sub or i < 0 or k < 0:
            return mpq(0)
        return psi(j, i if j >= 0 else k, A)

    def T(i, k):
        if i < 0 or k < 0:
            return mpq(0)
        return A.col_entry(i - k, k)

    r = s + d
    if r < 0:
        raise IndexError((d, s))
    acc = mpq(0)
    for t in range(max(0, r - sub), r + sup + 1):
        acc += P(r, t) * T(t, s)
    for t in range(max(0, s - sup), s + p + 2):
        acc -= T(r, t) * P(t, s)
    return acc - P(r, s)


def compatibility_levels(fs):
    """Diagonal offsets ``d`` (entry ``[s+d][s]``) on which the compatibility can be nonzero."""
    _, sup, _ = psi_model(fs)
    return list(range(-sup, fs.p + 1))


# --------------------------------------------------------------------------
# readings and laws

@dataclass
class Reading:
    name: str
    conv: str
    fn: Callable
    indices: Callable          # indices(fs, n_max) -> iterable of tuples


@dataclass
class Law:
    name: str
    readings: list
    level: int | None = None   # compatibility diagonal behind the derived reading
    unknown: Callable | None = None   # unknown(fs, s) -> (k, j) column-indexed entry it determines

    def reading(self, name):
        for r in self.readings:
            if r.name == name:
                return r
        raise KeyError(name)


def _I(a, n, p):
    """``I^(a)_n``: 1 when ``n = a - 1 (mod p)``; ``a`` is read cyclically."""
    return 1 if n >= 0 and n % p == (a - 1) % p else 0


def _D(a, k, p):
    """``D^(a)_k = (floor(k/p) + 1) I^(a)_k`` (zero for ``k < 0``)."""
    return (k // p + 1) * _I(a, k, p) if k >= 0 else 0


def _range(n_max):
    return lambda fs, n: [(s,) for s in range(0, n_max + 1)]


def _pm(fs, n_max, lo=0, hi=None):
    """Pairs ``(m, a)`` with ``pm + a <= n_max`` and ``a`` in ``lo..hi``."""
    hi = fs.p - 1 if hi is None else hi
    return [(m, a) for m in range(n_max // fs.p + 1) for a in range(lo, hi + 1) if fs.p * m + a <= n_max]


def _derived(law_level):
    def fn(fs, A, s):
        return compatibility_diagonal(fs, A, law_level, s)
    return Reading("derived", "col", fn, lambda fs, n: [(s,) for s in range(0, n + 1)])


def _both(name, fn, indices):
    return [Reading(f"{name}/col", "col", fn, indices), Reading(f"{name}/row", "row", fn, indices)]


# ---- multiple Charlier

def _charlier_laws(fs):
    p = fs.p
    S = sum(fs.eta)
    e = fs.eta_of

    def c0(fs, A, m, a):
        return A(0, p * m + a) - (p * m + a + e(a + 1))

    def c1(fs, A, m, a):
        return A(1, p * m + a) - (sum(e(b) for b in range(1, a + 1)) + m * S)

    def c2(fs, A, m, a, l):
        n = p * m + a
        return A(l + 1, n) - A(l + 1, n - 1) - A(l, n - 1) * (e(a - l) - e(a))

    def c2_idx(fs, n):
        return [(m, a, l) for l in range(1, p) for (m, a) in _pm(fs, n, l + 1, p - 1)]

    def k1(fs, A, s):
        return A(0, s + p) - A(0, s) - p

    def k2(fs, A, s, a):
        return A(a + 1, s) - A(a + 1, s - 1) - A(a, s) * (A(0, s) - A(0, s + a) + a)

    def k3(fs, A, s):
        return A(1, s) - A(1, s - 1) - sum(e(a) * _I(a, s, p) for a in range(1, p + 1))

    def k4(fs, A, s):
        return (A(0, s + 1) - A(0, s) - 1
                - sum(e(a) * (_I(a, s + 1, p) - _I(a, s, p)) for a in range(1, p + 1)))

    pm_all = lambda fs, n: _pm(fs, n)
    pm_hi = lambda fs, n: _pm(fs, n, 1)
    k2_idx = lambda fs, n: [(s, a) for s in range(n + 1) for a in range(1, p)]
    return [
        Law("alpha^(0)_{pm+a} closed form", _both("printed", c0, pm_all)),
        Law("alpha^(1)_{pm+a} closed form", _both("printed", c1, pm_hi)
            + [Reading("printed+a=0/row", "row", c1, pm_all)]),
        Law("alpha^(l+1)_{pm+a} recursion", _both("printed", c2, c2_idx)),
        Law("a_-^p alpha^(0) - alpha^(0) = p", _both("printed", k1, _range_fn())),
        Law("alpha^(a+1) - a_+ alpha^(a+1) = alpha^(a)(alpha^(0) - a_-^a alpha^(0) + a)",
            _both("printed", k2, k2_idx)),
        Law("alpha^(1) - a_+ alpha^(1) = sum eta^(a) I^(a)", _both("printed", k3, _range_fn())
            + [_derived(0)], level=0),
        Law("a_- alpha^(0) - alpha^(0) = sum eta^(a)(a_- I^(a) - I^(a)) + 1",
            _both("printed", k4, _range_fn())),
    ]


def _range_fn():
    return lambda fs, n: [(s,) for s in range(0, n + 1)]


# ---- multiple Meixner II

def meixner2_alpha0(fs, n):
    eta = fs.shared_eta
    a, m = divmod(n, fs.p)
    return (n + eta * (fs.b_of(m + 1) + a)) / (1 - eta)


def meixner2_alpha1(fs, n):
    """Column-indexed ``alpha^(1)_n``, summed from the unit-step law for ``alpha^(1)``."""
    eta, p = fs.shared_eta, fs.p
    acc = sum((k + fs.b_of(k % p + 1) + k // p for k in range(n + 1)), mpq(0))
    return eta / (1 - eta) ** 2 * acc


def _meixner2_laws(fs):
    p = fs.p
    eta = fs.shared_eta
    b = fs.b_of

    def m0(fs, A, a, m):
        return A(0, p * a + m) - meixner2_alpha0(fs, p * a + m)

    def m1(fs, A, a, m):
        n = p * a + m
        inner = (p + eta) * mpq(a * (a + 1), 2) + mpq(m * (m + 1), 2) + eta * sum(b(j + 1) for j in range(m + 1))
        return A(1, n) - (inner / (1 - eta) - mpq((n - 1) * n, 2)) / (1 - eta)

    def m1_summed(fs, A, a, m):
        return A(1, p * a + m) - meixner2_alpha1(fs, p * a + m)

    def m2(fs, A, a, m, l):
        n = p * a + m
        return (A(l + 1, n + l + 1) - A(l + 1, n + l)
                - eta / (1 - eta) * A(l, n + l) * (1 + b(m + 1) + a))

    def am_idx(fs, n):
        return [(a, m) for (a, m) in _pm(fs, n)]

    def m2_idx(fs, n):
        return [(a, m, l) for l in range(1, p) for (a, m) in _pm(fs, n)]

    def mk1(fs, A, s, shift=1):
        acc = mpq(0)
        for a in range(1, p + 1):
            acc += _I(a + shift, s, p) * (b(a) + _D(a, s - (p - 1), p))
            acc -= _I(a, s, p) * (b(a) + _D(a, s - p, p))
        return A(0, s + 1) - A(0, s) - (1 + eta * acc) / (1 - eta)

    def mk1_minus(fs, A, s):
        return mk1(fs, A, s, shift=-1)

    def mk2(fs, A, s):
        return A(1, s) - A(1, s - 1) - (A(0, s) - s) / (1 - eta)

    def mk3(fs, A, s, l):
        diag = 1 + sum(_I(a, s, p) * (b(a) + _D(a, s - p, p)) for a in range(1, p + 1))
        off = sum(_I(a + l, s, p) * (b(a) + _D(a, s - (p - l), p)) for a in range(1, p + 1))
        return A(l + 1, s) - A(l + 1, s - 1) - eta / (1 - eta) * (A(l, s) * diag - off)

    s_idx = _range_fn()
    l_idx = lambda fs, n: [(s, l) for l in range(1, p) for s in range(n + 1)]
    laws = [
        Law("alpha^(0)_{pa+m} closed form", _both("printed", m0, am_idx), level=-1),
        Law("alpha^(1)_{pa+m} closed form", _both("printed", m1, am_idx)
            + [Reading("corrected/summed", "col", m1_summed, am_idx)], level=0),
        Law("alpha^(l+1) forward law", _both("printed", m2, m2_idx) + [_levels_reading(range(1, p))]),
        Law("a_- alpha^(0) - alpha^(0) law", _both("printed", mk1, s_idx)
            + [Reading("corrected/I^(a-1)", "col", mk1_minus, s_idx), _derived(-1)], level=-1,
            unknown=lambda fs, s: (0, s)),
        Law("alpha^(1) - a_+ alpha^(1) law", _both("printed", mk2, s_idx) + [_derived(0)], level=0,
            unknown=lambda fs, s: (1, s)),
        Law("alpha^(l+1) - a_+ alpha^(l+1) law", _both("printed", mk3, l_idx)
            + [_levels_reading(range(1, p))]),
    ]
    return laws


def _levels_reading(levels, name="derived"):
    levels = list(levels)

    def fn(fs, A, s, d):
        return compatibility_diagonal(fs, A, d, s)
    return Reading(name, "col", fn, lambda fs, n: [(s, d) for d in levels for s in range(n + 1)])


# ---- generalized Charlier

def _gen_charlier_laws(fs):
    p, c = fs.p, fs.c
    e = fs.eta_of

    def r_plain(k):
        return r_index(k, p)

    def r_mod(k):
        return k % p

    def r_eta(k):
        return e(r_index(k, p))

    def g0(r, shift):
        def fn(fs, A, m):
            q = A(p, m + p)
            return A(0, m + p) - (m + p - 1 - c - A(0, m + p - 1)
                                  + A(p, m + p - 1) / q * (A(0, m - 1) + A(0, m) + c - m + shift)
                                  + A(p - 1, m + p - 1) / q * (r(m + 1) - r(m)))
        return fn

    def g1(r):
        def fn(fs, A, m):
            return A(1, m + 2) - (A(1, m) + A(0, m + 1) + A(0, m) + c - m
                                  + (A(0, m) - A(0, m + 1)) * (A(0, m) + A(0, m + 1) + c - m)
                                  + r(m + 2) - r(m + 1))
        return fn

    def g2(r):
        def fn(fs, A, m):
            return A(2, m + 2) - (A(2, m) + A(1, m) * (A(0, m) + A(0, m - 1) + c - m + 1)
                                  - A(1, m + 1) * (A(0, m) + A(0, m + 1) + c - m) + r(m + 1))
        return fn

    def g3(r, tie):
        def fn(fs, A, m, n, a):
            if tie:
                a = n
            return A(n + 2, n + 2 + m) - (A(n + 2, n + m)
                                          - A(n + 1, m + n + 1) * (A(0, a + m) + A(0, a + m + 1) + c - (a + m))
                                          + A(a + 1, a + m) * (A(0, m - 1) + A(0, m) + c - (m - 1))
                                          + A(n, m + a) * (r(m + 1) - r(a + m + 1)))
        return fn

    m_idx = _range_fn()
    g3_idx = lambda fs, n: [(m, nn, a) for nn in range(1, p - 1) for a in range(1, p - 1) for m in range(n + 1)]
    g3_tied = lambda fs, n: [(m, nn, nn) for nn in range(1, p - 1) for m in range(n + 1)]

    def printed(tag, make):
        out = []
        for rn, r in (("r", r_plain), ("r=mod", r_mod)):
            out += _both(f"printed[{rn}]", make(r), None)
        return out

    def with_idx(readings, idx):
        for rd in readings:
            rd.indices = idx
        return readings

    laws = [
        Law("alpha^(0)_{m+p} law",
            with_idx(printed("g0", lambda r: g0(r, 0)), m_idx)
            + [Reading("corrected[eta^(r), c-(m-1)]/row", "row", g0(r_eta, 1), m_idx), _derived(p - 1)],
            level=p - 1, unknown=lambda fs, s: (0, s + p)),
        Law("alpha^(1)_{m+2} law",
            with_idx(printed("g1", g1), m_idx)
            + [Reading("corrected[eta^(r)]/row", "row", g1(r_eta), m_idx), _derived(-1)],
            level=-1, unknown=lambda fs, s: (1, s)),
        Law("alpha^(2)_{m+2} law",
            with_idx(printed("g2", g2), m_idx)
            + [Reading("corrected[eta^(r)]/row", "row", g2(r_eta), m_idx), _derived(0)],
            level=0, unknown=lambda fs, s: (2, s)),
    ]
    if p >= 3:
        g3p = []
        for rn, r in (("r", r_plain), ("r=mod", r_mod)):
            g3p += _both(f"printed[{rn}]", g3(r, False), g3_idx)
        laws.append(Law("alpha^(n+2)_{n+2+m} law", g3p
                        + [Reading("corrected[eta^(r), a=n]/row", "row", g3(r_eta, True), g3_tied),
                           _levels_reading(range(1, p - 1))]))
    return laws


# ---- generalized Meixner II

def _gen_meixner2_laws(fs):
    p, c = fs.p, fs.c
    eta = fs.shared_eta
    b = fs.b_of

    def gm0(fs, A, a, m):
        n1 = (a + 1) * p + m
        q = A(p, n1)
        return A(0, n1) - (-A(0, n1 - 1) + a + p - 1 - c
                           + (eta * (A(p - 1, n1 - 1) * (b(m + 1) + a + 1) + A(p, n1) - A(p, n1 - 1))
                              + A(p, n1 - 1) * (A(0, p * a + m) + A(0, p * a + m - 1) + c - (a - 1))) / q)

    def gm1(fs, A, a, m):
        n = p * a + m
        return A(1, n + 2) - (A(1, n) + eta * (A(0, n + 1) - A(0, n) - b(m) - a)
                              + (A(0, n) - A(0, n + 1) + 1) * (A(0, n + 1) + A(0, n) + c - (m + p * a)))

    def gm2a(fs, A, a, m, l):
        n = p * a + m
        return A(l + 2, n + l + 2) - (A(l + 2, n + l) + eta * (A(l + 1, n + l + 1) - A(l + 1, n + l))
                                      - A(l + 1, n + l + 1) * (A(0, n + l + 1) + A(0, n + l) + c - (a + l))
                                      + A(l + 1, n + l) * (A(0, n) + A(0, n - 1) + c - (a - 1)))

    def gm2b(fs, A, a, m, l):
        n = p * a + m
        return A(l + 2, n + l + 2) - (A(l + 2, n + l)
                                      + eta * (A(l, n + l) * (b(m + 1) + a + 1) + A(l + 1, n + l + 1) - A(l + 1, n + l))
                                      + A(l + 1, n + l + 1) * (A(0, n + l + 1) + c - (a + l) + A(0, n + l))
                                      + A(l + 1, n + l) * (A(0, n) + A(0, n - 1) + c - (a - 1)))

    def am(lo):
        return lambda fs, n: [(a, m) for a in range(n // p + 1) for m in range(lo, lo + p) if p * a + m <= n]

    def aml(lo):
        return lambda fs, n: [(a, m, l) for l in range(0, p - 1) for (a, m) in am(lo)(fs, n)]

    def printed(fn, idx):
        out = []
        for tag, lo in (("m=0..p-1", 0), ("m=1..p", 1)):
            out += _both(f"printed[{tag}]", fn, idx(lo))
        return out

    return [
        Law("alpha^(0)_{(a+1)p+m} law", printed(gm0, am) + [_derived(p - 1)], level=p - 1,
            unknown=lambda fs, s: (0, s + p)),
        Law("alpha^(1)_{pa+m+2} law", printed(gm1, am) + [_derived(-1)], level=-1,
            unknown=lambda fs, s: (1, s)),
        Law("alpha^(l+2)_{pa+m+l+2} law (first form)", printed(gm2a, aml)
            + [_levels_reading(range(0, p - 1))]),
        Law("alpha^(l+2)_{pa+m+l+2} law (second form)", printed(gm2b, aml)
            + [_levels_reading(range(0, p - 1))]),
    ]


def family_laws(fs: FamilySpec):
    validate_family(fs)
    return {
        "charlier": _charlier_laws,
        "gen-charlier": _gen_charlier_laws,
        "meixner2": _meixner2_laws,
        "gen-meixner2": _gen_meixner2_laws,
    }[fs.kind](fs)


# --------------------------------------------------------------------------
# evaluation

@dataclass
class ReadingResult:
    name: str
    max_residual: mpq
    count: int
    ok: bool


def evaluate_reading(fs, reading: Reading, rd, n_max, budget, limit=None):
    A = AlphaView(rd.alphas, fs.p, reading.conv, limit)
    residuals = []
    for idx in reading.indices(fs, n_max):
        try:
            residuals.append(reading.fn(fs, A, *idx))
        except (IndexError, ZeroDivisionError):
            continue
    worst = max_abs(residuals) if residuals else mpq(0)
    ok = bool(residuals) and budget.accepts(worst)
    return ReadingResult(reading.name, worst, len(residuals), ok)


def adjudicate(fs, law: Law, rd, n_max, budget, limit=None):
    """Evaluate every reading; the law passes when one of them validates."""
    results = [evaluate_reading(fs, r, rd, n_max, budget, limit) for r in law.readings]
    if not any(r.count for r in results):
        return skipped(law.name, f"no instances at p={fs.p}"), results
    good = [r for r in results if r.ok]
    bad = [r for r in results if not r.ok and r.count]
    note = "validated: " + (", ".join(r.name for r in good) or "none")
    if bad:
        note += "; failing: " + ", ".join(f"{r.name} ({float(r.max_residual):.2e})" for r in bad)
    if good:
        best = min(good, key=lambda r: r.max_residual)
        check = Check(law.name, best.max_residual, budget, PASS, [], note)
    else:
        worst = min((r.max_residual for r in bad), default=mpq(0))
        check = Check(law.name, worst, budget, FAIL, [r.name for r in bad],
                      "erratum candidate; " + note)
    return check, results


def forward_run(fs, law: Law, rd, n_max, limit=None, start=None):
    """Solve the derived reading of ``law`` for its unknown, step by step.

    Entries before ``start`` and all other alphas are seeded from ``rd``; the
    unknown entries are replaced by the recursion's own output as it runs.
    Returns ``[(entry, run value, factorization value)]``.
    """
    if law.unknown is None or law.level is None:
        raise WrongKind(f"{law.name} has no forward recursion")
    base = AlphaView(rd.alphas, fs.p, "col", limit)
    start = (2 if fs.generalized else 1) if start is None else start
    overrides = {}
    out = []
    for s in range(start, n_max + 1):
        key = law.unknown(fs, s)
        try:
            truth = base.col_entry(*key)
            e0 = compatibility_diagonal(fs, base.with_overrides({**overrides, key: mpq(0)}), law.level, s)
            e1 = compatibility_diagonal(fs, base.with_overrides({**overrides, key: mpq(1)}), law.level, s)
        except IndexError:
            break
        x = -e0 / (e1 - e0)
        overrides[key] = x
        out.append((key, x, truth))
    return out


def closed_form_table(fs: FamilySpec, n_max: int):
    """Column-indexed closed-form alphas ``{k: [alpha^(k)_0, ...]}`` for Charlier and Meixner II."""
    if fs.kind == "charlier":
        return charlier_closed_form(fs, n_max)
    if fs.kind == "meixner2":
        return {0: [meixner2_alpha0(fs, n) for n in range(n_max + 1)],
                1: [meixner2_alpha1(fs, n) for n in range(n_max + 1)]}
    raise WrongKind(f"no closed forms for {fs.kind}")


def charlier_closed_form(fs: FamilySpec, n_max: int):
    """Column-indexed table of ``alpha^(0..p)_n``, ``n = 0..n_max``.

    ``alpha^(0)`` and ``alpha^(1)`` come from their closed forms (the latter is
    row indexed, so ``alpha^(1)_n`` here is its value at ``n + 1``); higher
    subdiagonals follow from ``alpha^(a+1)_n = alpha^(a+1)_{n-1} +
    alpha^(a)_n (alpha^(0)_n - alpha^(0)_{n+a} + a)`` with zero before ``n = 0``.
    """
    if fs.kind != "charlier":
        raise WrongKind(f"charlier_closed_form needs a Multiple Charlier spec, got {fs.kind}")
    validate_family(fs)
    p = fs.p
    S = sum(fs.eta)
    top = n_max + p + 1
    a0 = [n + fs.eta_of(n % p + 1) for n in range(top + p + 1)]

    def a1_row(n):
        m, a = divmod(n, p)
        return sum((fs.eta_of(b) for b in range(1, a + 1)), mpq(0)) + m * S

    table = {0: a0[:n_max + 1], 1: [a1_row(n + 1) for n in range(top)]}
    for k in range(1, p):
        nxt, prev = [], mpq(0)
        for n in range(top):
            prev = prev + table[k][n] * (a0[n] - a0[n + k] + k)
            nxt.append(prev)
        table[k + 1] = nxt
    return {k: list(v[:n_max + 1]) for k, v in table.items()}


def psi_display_checks(fs, lf, rd, budget, n_max):
    """Closed-form psi diagonals against both routes of the pipeline's ``Psi``."""
    sub, sup, psi = psi_model(fs)
    A = AlphaView(rd.alphas, fs.p, "col")
    report = Report(f"{fs.kind} psi diagonals")
    for j in range(-sub, sup + 1):
        for route in ("left", "right"):
            diag = lf.psi(j, route)
            res, locs = [], []
            for n in range(min(n_max + 1, len(diag))):
                try:
                    res.append(diag[n] - psi(j, n, A))
                except IndexError:
                    break
                locs.append(n)
            report.add(judge(f"psi^({j}) closed form [{route}]", res, budget, locs))
    return report


def verify_family_lf(fs: FamilySpec, pl, n_max: int, budget: ToleranceBudget | None = None) -> Report:
    """Adjudicate every coefficient law of ``fs`` against the pipeline's alphas."""
    validate_family(fs)
    if pl.ws.p != fs.p:
        raise WrongKind(f"pipeline p={pl.ws.p} does not match family p={fs.p}")
    budget = pl.budget if budget is None else budget
    rd = pl.rd
    limit = rd.T.rows - 1
    if limit < n_max + fs.p + 1:
        raise WindowTooSmall(f"alpha tables reach {limit}, need {n_max + fs.p + 1}")
    report = Report(f"{fs.kind} Laguerre-Freud laws")
    report.add(psi_display_checks(fs, pl.lf, rd, budget, n_max))
    A = AlphaView(rd.alphas, fs.p, "col", limit)
    for d in compatibility_levels(fs):
        res = []
        for s in range(n_max + 1):
            try:
                res.append(compatibility_diagonal(fs, A, d, s))
            except IndexError:
                break
        report.add(judge(f"[Psi,T] = Psi closed-form diagonal {d}", res, budget))
    laws = family_laws(fs)
    for law in laws:
        report.add(adjudicate(fs, law, rd, n_max, budget, limit)[0])
    if fs.kind in ("charlier", "meixner2"):
        table = closed_form_table(fs, n_max)
        for k, vals in table.items():
            res = [vals[n] - A(k, n) for n in range(len(vals))]
            report.add(judge(f"closed-form alpha^({k}) table", res, budget, list(range(len(vals)))))
    if fs.generalized:
        for law in laws:
            if law.unknown is None:
                continue
            run = forward_run(fs, law, rd, n_max, limit)
            res = [x - t for _, x, t in run]
            locs = [k for k, _, _ in run]
            allowance = ToleranceBudget.tail(budget.bound * max(1, len(run)), budget.amplification) \
                if budget.mode == "tail" else budget
            report.add(judge(f"forward run: {law.name}", res, allowance, locs))
    return report


__all__ = [
    "FamilySpec", "KINDS", "validate_family", "family_to_weight_system", "r_index",
    "AlphaView", "psi_model", "compatibility_diagonal", "compatibility_levels",
    "Reading", "Law", "family_laws", "evaluate_reading", "adjudicate", "forward_run",
    "charlier_closed_form", "closed_form_table", "meixner2_alpha0", "meixner2_alpha1",
    "psi_display_checks", "verify_family_lf",
]
