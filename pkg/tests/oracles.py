"""Independent reference computations over ``fractions.Fraction``.

Nothing here imports the package's arithmetic: determinants use Laplace
expansion, weights are built from factorials and Pochhammer products directly.
"""
from fractions import Fraction
from math import factorial


def F(x):
    """Package rationals (gmpy2.mpq) and strings to Fraction."""
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


def cofactor_det(rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def poch(a, k):
    r = Fraction(1)
    for i in range(k):
        r *= a + i
    return r


def weight(eta, b, c, k):
    """``eta^k prod (b_i)_k / (k! prod (c_j)_k)``."""
    num = Fraction(eta) ** k
    for bi in b:
        num *= poch(Fraction(bi), k)
    den = Fraction(factorial(k))
    for cj in c:
        den *= poch(Fraction(cj), k)
    return num / den


def moments(eta, b, c, K, m_max):
    """``sum_{k<=K} k^m w(k)`` for m = 0..m_max."""
    ws = [weight(eta, b, c, k) for k in range(K + 1)]
    return [sum(Fraction(k) ** m * w for k, w in enumerate(ws)) for m in range(m_max + 1)]


def moment_grid(weights, K, n, rows=None):
    """Moment matrix ``M[i][j] = rho^(j%p+1)_{i + j//p}`` from (eta, b, c) triples."""
    p = len(weights)
    rows = n if rows is None else rows
    m_max = rows + n // p + 1
    rho = [moments(*w, K, m_max) for w in weights]
    return [[rho[j % p][i + j // p] for j in range(n)] for i in range(rows)]


def classical_charlier_alpha0(eta, n):
    return n + Fraction(eta)


def classical_charlier_alpha1(eta, n):
    """Column convention: ``alpha^(1)_m = T[m+1][m] = (m+1) eta``."""
    return (n + 1) * Fraction(eta)
