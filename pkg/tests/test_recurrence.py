from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from mops.factorization import gauss_borel
from mops.kernel import Q, band_mul
from mops.moments import build_moments, moment_matrix
from mops.opsys import poly_add, poly_mul_x, trim
from mops.recurrence import (alpha_table, build_pascal, build_T, dress_pascal, pascal, verify_pascal,
                             verify_recurrence, verify_shifts, verify_T)
from mops.weights import PearsonSigma, make_weight_system, truncate_measure

from oracles import F, classical_charlier_alpha0, classical_charlier_alpha1

TAIL = Fraction(1, 10 ** 25)


def setup(etas, size=10, m_max=None):
    ws = make_weight_system(len(etas), [], [PearsonSigma(Q(e)) for e in etas])
    m_max = size + size // len(etas) + 4 if m_max is None else m_max
    ms = build_moments(truncate_measure(ws, m_max, "1e-40"))
    f = gauss_borel(moment_matrix(ms, size))
    return f, build_T(f, len(etas))


def test_classical_charlier_coefficients():
    f, rd = setup(["1/2"])
    for n in range(6):
        assert abs(F(rd.alphas[0][n]) - classical_charlier_alpha0(Fraction(1, 2), n)) < TAIL
        assert abs(F(rd.alphas[1][n]) - classical_charlier_alpha1(Fraction(1, 2), n)) < TAIL


def test_multiple_charlier_main_diagonal():
    f, rd = setup(["1/3", "1/5"])
    for n, want in enumerate((Fraction(1, 3), Fraction(6, 5), Fraction(7, 3))):
        assert abs(F(rd.alphas[0][n]) - want) < TAIL


def test_alpha_table_rows():
    f, rd = setup(["1/3", "1/5"])
    rows = alpha_table(rd, 3)
    assert [r[0] for r in rows] == [0, 1, 2]
    assert rows[1][1:] == [rd.alphas[k][1] for k in range(3)]


def test_structure_exact_p3():
    f, rd = setup(["2/7", "1/5", "3/11"], size=11)
    rep = verify_T(rd)
    assert rep.passed, rep.summary()
    assert rep["sum_a T^(a) = T^T"].max_residual == 0


def test_first_row_of_recurrence():
    f, rd = setup(["1/3", "1/5"])
    B0 = [1]
    B1 = list(f.S.entries[1][:2])
    assert trim(poly_add(B1, [rd.alphas[0][0] * c for c in B0])) == trim(poly_mul_x(B0))


def test_recurrence_exact_p2_charlier():
    f, rd = setup(["1/3", "1/5"], size=9)
    assert verify_recurrence(rd, f).passed


def test_recurrence_exact_p3_generalized_meixner():
    ws = make_weight_system(3, [Q("4/3")], [PearsonSigma(Q("1/5"), (Q(b),)) for b in ("1/2", "3/4", "5/4")])
    ms = build_moments(truncate_measure(ws, 16, "1e-30"))
    f = gauss_borel(moment_matrix(ms, 9))
    rep = verify_recurrence(build_T(f, 3), f)
    assert rep.passed, rep.summary()


def test_pascal_window_entries():
    assert pascal(3).tolist() == [[1, 0, 0], [1, 1, 0], [1, 2, 1]]
    assert band_mul(pascal(6), pascal(6, -1)).tolist() == [[int(i == j) for j in range(6)] for i in range(6)]


def test_pascal_identities_and_shifts():
    rep = verify_pascal(build_pascal(2, 8))
    assert rep.passed
    f, rd = setup(["1/3", "1/5"], size=7)
    pd = dress_pascal(f, build_pascal(2, 7))
    assert verify_pascal(pd)["Pi+ Pi- = I"].max_residual == 0
    assert verify_shifts(pd, f).passed


two_etas = st.tuples(st.fractions(Fraction(1, 9), Fraction(2, 3), max_denominator=9),
                     st.fractions(Fraction(1, 9), Fraction(2, 3), max_denominator=9)).filter(lambda t: t[0] != t[1])


@given(two_etas)
def test_recurrence_structure_holds_for_random_parameters(etas):
    f, rd = setup([f"{e.numerator}/{e.denominator}" for e in etas], size=7, m_max=12)
    assert verify_T(rd).passed
    assert verify_recurrence(rd, f).passed
