from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from mops.factorization import gauss_borel
from mops.kernel import Q
from mops.moments import build_moments, moment_matrix
from mops.opsys import (poly_eval, poly_mul, poly_taylor_shift, type_I_degree, type_I_system,
                        type_I_system_det, type_II_poly, type_II_poly_det, verify_determinantal,
                        verify_orthogonality)
from mops.weights import PearsonSigma, make_weight_system, truncate_measure

from oracles import F, cofactor_det, moment_grid


def setup(etas, c=(), b=(), m_max=16, size=7):
    sig = [PearsonSigma(Q(e), tuple(Q(x) for x in bs)) for e, bs in zip(etas, b or [()] * len(etas))]
    ws = make_weight_system(len(etas), [Q(x) for x in c], sig)
    tm = truncate_measure(ws, m_max, "1e-30")
    ms = build_moments(tm)
    return tm, ms, gauss_borel(moment_matrix(ms, size))


def test_first_type_II_polynomials():
    tm, ms, f = setup(["1/2"])
    assert type_II_poly(f, 0).coeffs == (1,)
    B1 = type_II_poly(f, 1).coeffs
    assert B1[1] == 1
    assert abs(B1[0] + Q("1/2")) < Q("1e-25")
    assert B1[0] == -ms.moment(1, 1) / ms.moment(1, 0)


def test_bordered_determinant_small_cases():
    tm, ms, f = setup(["1/3", "1/5"])
    assert type_II_poly_det(ms, 0).coeffs == (1,)
    assert type_II_poly_det(ms, 1).coeffs == (-ms.moment(1, 1) / ms.moment(1, 0), 1)


def test_bordered_determinant_against_laplace_oracle():
    tm, ms, f = setup(["1/3", "1/5"])
    n = 3
    grid = moment_grid([(Fraction(1, 3), (), ()), (Fraction(1, 5), (), ())], ms.K, n, rows=n + 1)
    tau = cofactor_det(grid[:n])
    # B_n(x) = det [M^(n+1 rows) | (1, x, ..., x^n)^T] / tau_n, expanded in the last column
    for x in (Fraction(0), Fraction(1), Fraction(5, 2)):
        bordered = [row + [x ** i] for i, row in enumerate(grid)]
        assert F(type_II_poly_det(ms, n)(Q(f"{x.numerator}/{x.denominator}"))) == cofactor_det(bordered) / tau


def test_type_I_start_of_step_line():
    tm, ms, f = setup(["1/3", "1/5"])
    A = type_I_system(f, 2, 0).polys
    assert A[0].coeffs == (1 / ms.moment(1, 0),)
    assert A[1].coeffs == ()


def test_type_I_degrees():
    assert type_I_degree(3, 1, 2) == 1 and type_I_degree(3, 2, 2) == 1
    tm, ms, f = setup(["1/3", "1/5"])
    A = type_I_system(f, 2, 3).polys
    assert A[0].degree == 1 and A[1].degree == 1


def test_determinantal_routes_agree_exactly():
    for etas, size in ((["1/3", "1/5"], 7), (["1/3", "1/5", "1/7"], 7)):
        tm, ms, f = setup(etas, size=size)
        assert verify_determinantal(ms, f, 6 if len(etas) == 2 else 5).passed
    tm, ms, f = setup(["1/4", "1/4"], c=["3/2"], b=[["1/3"], ["2/5"]])
    assert verify_determinantal(ms, f, 6).passed


def test_orthogonality_exact_and_fault_localized():
    tm, ms, f = setup(["1/3", "1/5"])
    assert verify_orthogonality(tm, f, 4).passed
    B3 = list(type_II_poly(f, 3).coeffs)
    B3[1] += Q("1/100")
    rep = verify_orthogonality(tm, f, 4, type_II_override={3: B3})
    assert not rep.passed
    # every condition on B_3 sees the perturbation; no other row is flagged
    assert rep["type II orthogonality"].failures == [("II", 3, 1, 0), ("II", 3, 1, 1), ("II", 3, 2, 0)]


def test_type_I_fault_localized():
    tm, ms, f = setup(["1/3", "1/5"])
    polys = [list(p.coeffs) for p in type_I_system(f, 2, 2).polys]
    polys[0][0] += Q("1/7")
    rep = verify_orthogonality(tm, f, 4, type_I_override={2: polys})
    fails = rep["type I orthogonality"].failures
    assert fails == [("I", 2, 0), ("I", 2, 1), ("I", 2, 2)]


def test_determinantal_type_I_at_step_zero():
    tm, ms, f = setup(["1/3", "1/5"])
    assert type_I_system_det(ms, 0).polys[0].coeffs == (1 / ms.moment(1, 0),)


rat = st.fractions(min_value=-3, max_value=3, max_denominator=6).map(lambda x: Q(f"{x.numerator}/{x.denominator}"))


@given(st.lists(rat, min_size=1, max_size=5), rat, rat)
def test_taylor_shift_is_evaluation_shift(c, h, x):
    assert poly_eval(poly_taylor_shift(c, h), x) == poly_eval(c, x + h)


@given(st.lists(rat, min_size=1, max_size=4), st.lists(rat, min_size=1, max_size=4), rat)
def test_poly_mul_is_pointwise(a, b, x):
    assert poly_eval(poly_mul(a, b), x) == poly_eval(a, x) * poly_eval(b, x)


@given(st.integers(0, 12), st.integers(1, 4))
def test_type_I_degrees_sum_to_n(n, p):
    # interleaved coefficient count: sum_a (deg A^(a)_n + 1) = n + 1
    assert sum(type_I_degree(n, a, p) + 1 for a in range(1, p + 1)) == n + 1
