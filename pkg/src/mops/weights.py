"""Pearson weights on the lattice N_0 and their certified truncations.

A weight system carries ``p`` weights

    w_a(k) = prod_i (b_i^a)_k / prod_j (c_j)_k * eta_a^k / k!

sharing the denominator parameters ``c``. They satisfy the discrete Pearson
equation ``theta(k+1) w_a(k+1) = sigma_a(k) w_a(k)`` with
``theta(k) = k prod_j (k + c_j - 1)`` and ``sigma_a(k) = eta_a prod_i (k + b_i^a)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from gmpy2 import mpq

from .errors import DivergentSeries, IndexOutOfRange, PochhammerPole, TailNotCertifiable
from .kernel import Q, fmt
from .report import FAIL, PASS, Check, Report, ToleranceBudget

DEFAULT_K_CAP = 20000


def is_nonpositive_integer(x) -> bool:
    x = Q(x)
    return x.denominator == 1 and x <= 0


def pochhammer(a, k: int):
    r = mpq(1)
    for i in range(k):
        r *= a + i
    return r


def poly_from_roots(lead, roots):
    """Ascending coefficients of ``lead * prod (x + r)``."""
    coeffs = [Q(lead)]
    for r in roots:
        new = [mpq(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i] += c * r
            new[i + 1] += c
        coeffs = new
    return coeffs


@dataclass(frozen=True)
class PearsonSigma:
    eta: mpq
    b: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "eta", Q(self.eta))
        object.__setattr__(self, "b", tuple(Q(x) for x in self.b))

    @property
    def degree(self):
        return len(self.b)

    def __call__(self, k):
        r = self.eta
        for bi in self.b:
            r *= k + bi
        return r

    def coefficients(self):
        return poly_from_roots(self.eta, self.b)


@dataclass(frozen=True)
class WeightSystem:
    p: int
    c: tuple
    sigmas: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(Q(x) for x in self.c))
        object.__setattr__(self, "sigmas", tuple(self.sigmas))

    @property
    def N(self):
        return len(self.c)

    def M(self, a):
        return self.sigmas[a - 1].degree

    @property
    def deg_theta(self):
        return self.N + 1

    @property
    def deg_sigma(self):
        return max(s.degree for s in self.sigmas)

    def theta(self, k):
        r = mpq(k)
        for cj in self.c:
            r *= k + cj - 1
        return r

    def theta_coefficients(self):
        return [mpq(0)] + poly_from_roots(1, [cj - 1 for cj in self.c])

    def sigma(self, a, k):
        return self.sigmas[a - 1](k)

    def classification(self, a):
        return "entire" if self.M(a) <= self.N else "disk"

    def to_json(self):
        return json.dumps({
            "p": self.p,
            "c": [fmt(x) for x in self.c],
            "weights": [{"eta": fmt(s.eta), "b": [fmt(x) for x in s.b]} for s in self.sigmas],
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else text
        sigmas = [PearsonSigma(Q(w["eta"]), tuple(Q(x) for x in w.get("b", []))) for w in d["weights"]]
        return make_weight_system(int(d["p"]), [Q(x) for x in d.get("c", [])], sigmas)


def make_weight_system(p, c, sigmas) -> WeightSystem:
    if p < 1:
        raise ValueError("p must be >= 1")
    sigmas = [s if isinstance(s, PearsonSigma) else PearsonSigma(*s) for s in sigmas]
    if len(sigmas) != p:
        raise ValueError(f"expected {p} sigma specifications, got {len(sigmas)}")
    c = [Q(x) for x in c]
    for j, cj in enumerate(c, 1):
        if is_nonpositive_integer(cj):
            raise PochhammerPole(f"c_{j} = {fmt(cj)} makes (c_{j})_k vanish")
    N = len(c)
    for a, s in enumerate(sigmas, 1):
        if s.degree > N + 1:
            raise DivergentSeries(a, f"M={s.degree} > N+1={N + 1}: series diverges")
        if s.degree == N + 1 and abs(s.eta) >= 1 and not _finite_support(s):
            raise DivergentSeries(a, f"M = N+1 requires |eta| < 1, got eta={fmt(s.eta)}")
    return WeightSystem(p, tuple(c), tuple(sigmas))


def _finite_support(s: PearsonSigma):
    return s.eta == 0 or any(is_nonpositive_integer(b) for b in s.b)


def eval_weight(ws: WeightSystem, a: int, k: int):
    if not 1 <= a <= ws.p:
        raise IndexOutOfRange(f"weight index {a} not in 1..{ws.p}")
    if k < 0:
        raise IndexOutOfRange("lattice point must be >= 0")
    s = ws.sigmas[a - 1]
    num = s.eta ** k
    for b in s.b:
        num *= pochhammer(b, k)
    den = mpq(1)
    for cj in ws.c:
        den *= pochhammer(cj, k)
    for i in range(2, k + 1):
        den *= i
    return num / den


def weight_values(ws: WeightSystem, a: int, K: int):
    """``[w_a(0), ..., w_a(K)]`` by running products (same values as :func:`eval_weight`)."""
    s = ws.sigmas[a - 1]
    out = [mpq(1)]
    num = den = mpq(1)
    for k in range(K):
        f = s.eta
        for b in s.b:
            f *= b + k
        g = mpq(k + 1)
        for cj in ws.c:
            g *= cj + k
        num *= f
        den *= g
        out.append(num / den)
    return out


# --------------------------------------------------------------------------
# certified truncation

@dataclass(frozen=True)
class TruncatedMeasure:
    ws: WeightSystem
    K: int
    values: tuple           # values[a-1][k] = w_a(k), k = 0..K
    tail_bound: mpq
    m_max: int

    @property
    def p(self):
        return self.ws.p


def _ratio_sup(ws: WeightSystem, a: int, k0: int, m_max: int):
    """Upper bound of |t_{k+1}/t_k| over all k >= k0, t_k = w_a(k) (1+k)^m_max.

    Valid once every linear factor is positive on [k0, inf). The bound pairs
    numerator factors (k + b_i) with denominator factors (k + c_j) and
    (k + 1); each quotient is monotone, so its sup is either the value at k0
    or the limit 1. Unpaired denominator factors are decreasing.
    """
    s = ws.sigmas[a - 1]
    dens = [mpq(1)] + list(ws.c)     # (k+1) and (k+c_j), from theta(k+1)
    nums = list(s.b)
    for x in nums + dens:
        if k0 + x <= 0:
            return None
    bound = abs(s.eta)
    nums_sorted = sorted(nums, reverse=True)
    dens_sorted = sorted(dens)
    paired = min(len(nums_sorted), len(dens_sorted))
    for b, c in zip(nums_sorted[:paired], dens_sorted[:paired]):
        if b > c:
            bound *= (k0 + b) / (k0 + c)
    for c in dens_sorted[paired:]:
        bound /= (k0 + c)
    bound *= (mpq(k0 + 2) / (k0 + 1)) ** m_max
    return bound


def _ratio_target(ws, a):
    """Contraction ratio used for the geometric tail bound of weight ``a``."""
    s = ws.sigmas[a - 1]
    if s.degree <= ws.N:
        return mpq(1, 2)
    lim = abs(s.eta)
    return max(mpq(1, 2), (1 + lim) / 2)


def weight_tail_certificate(ws, a, m_max, k_cap=DEFAULT_K_CAP):
    """Smallest k0 from which the weighted term ratio stays below rho, and rho."""
    s = ws.sigmas[a - 1]
    if s.eta == 0:
        return 0, mpq(0)
    rho = _ratio_target(ws, a)
    lo = 0
    while lo <= k_cap:
        r = _ratio_sup(ws, a, lo, m_max)
        if r is not None and r <= rho:
            # bisect down to the first admissible k0 (the bound is nonincreasing)
            hi, lo2 = lo, max(0, lo // 2)
            while lo2 < hi:
                mid = (lo2 + hi) // 2
                rm = _ratio_sup(ws, a, mid, m_max)
                if rm is not None and rm <= rho:
                    hi = mid
                else:
                    lo2 = mid + 1
            return hi, rho
        lo = max(1, 2 * lo)
    raise TailNotCertifiable(f"weight {a}: term ratio does not drop below {fmt(rho)} before k={k_cap}")


def _tail_at(ws, a, K, m_max, w_next, k0, rho):
    """Certified bound of sum_{k>K} |w_a(k)| (1+k)^m_max, or None if K+1 < k0."""
    if ws.sigmas[a - 1].eta == 0:
        return mpq(0)
    if K + 1 < k0:
        return None
    return abs(w_next) * mpq(K + 2) ** m_max / (1 - rho)


def truncate_measure(ws: WeightSystem, m_max: int, target_tail, K: int | None = None,
                     k_min: int = 0, k_cap: int = DEFAULT_K_CAP) -> TruncatedMeasure:
    """Truncate all weights at a common K with a rigorous tail certificate.

    With ``K=None`` the smallest K whose certified bound is ``<= target_tail``
    is chosen (at least ``k_min``). An explicit ``K`` is used as given and the
    bound is reported for it.
    """
    target_tail = Q(target_tail)
    if target_tail <= 0:
        raise ValueError("target_tail must be positive")
    certs = [weight_tail_certificate(ws, a, m_max, k_cap) for a in range(1, ws.p + 1)]

    def bound_at(K):
        total = mpq(0)
        for a in range(1, ws.p + 1):
            k0, rho = certs[a - 1]
            w_next = eval_weight(ws, a, K + 1)
            t = _tail_at(ws, a, K, m_max, w_next, k0, rho)
            if t is None:
                return None
            total += t
        return total

    if K is None:
        start = max(k_min, max(k0 for k0, _ in certs) - 1, 0)
        Kc = start
        # exponential search then bisection over the monotone certified bound
        step = 1
        while True:
            if Kc > k_cap:
                raise TailNotCertifiable(f"no K <= {k_cap} meets tail target {fmt(target_tail)}")
            b = bound_at(Kc)
            if b is not None and b <= target_tail:
                break
            Kc = start + step
            step *= 2
        lo, hi = max(start, Kc - step // 2), Kc
        while lo < hi:
            mid = (lo + hi) // 2
            b = bound_at(mid)
            if b is not None and b <= target_tail:
                hi = mid
            else:
                lo = mid + 1
        K = hi
    bound = bound_at(K)
    if bound is None:
        raise TailNotCertifiable(f"K={K} is below the certified ratio region")
    values = tuple(tuple(weight_values(ws, a, K)) for a in range(1, ws.p + 1))
    return TruncatedMeasure(ws, K, values, bound, m_max)


def verify_pearson(ws: WeightSystem, tm: TruncatedMeasure) -> Report:
    """Check ``theta(k+1) w_a(k+1) == sigma_a(k) w_a(k)`` exactly for k < K."""
    rep = Report("pearson")
    for a in range(1, ws.p + 1):
        w = tm.values[a - 1]
        bad = []
        worst = mpq(0)
        for k in range(tm.K):
            r = ws.theta(k + 1) * w[k + 1] - ws.sigma(a, k) * w[k]
            if r != 0:
                bad.append(k)
                worst = max(worst, abs(r))
        rep.add(Check(f"pearson[a={a}]", worst, ToleranceBudget.exact(),
                      PASS if not bad else FAIL, bad))
    return rep
