from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mops.errors import NonPerfectSystem
from mops.factorization import gauss_borel, reconstruct, verify_factorization
from mops.kernel import Q, identity
from mops.moments import build_moments, moment_matrix, tau_table
from mops.weights import PearsonSigma, make_weight_system, truncate_measure

from oracles import F, cofactor_det


def store(etas, m_max=14):
    ws = make_weight_system(len(etas), [], [PearsonSigma(Q(e)) for e in etas])
    return build_moments(truncate_measure(ws, m_max, "1e-30"))


def test_identity_factorizes_trivially():
    f = gauss_borel(identity(5).entries)
    assert f.S.tolist() == identity(5).tolist()
    assert f.S_tilde.tolist() == identity(5).tolist()
    assert f.H == (1,) * 5


def test_reconstruction_and_pivot_tau_relation():
    ms = store(["1/3", "1/5"])
    mm = moment_matrix(ms, 6)
    f = gauss_borel(mm)
    assert reconstruct(f).tolist() == mm.tolist()
    tau = tau_table(ms, 6).tau
    assert all(f.H[m] * tau[m] == tau[m + 1] for m in range(6))
    assert verify_factorization(f, mm, tau).passed


def test_equal_weights_not_perfect_at_order_two():
    ms = store(["1/3", "1/3"])
    with pytest.raises(NonPerfectSystem) as e:
        gauss_borel(moment_matrix(ms, 4))
    assert e.value.index == 2


def test_unit_main_diagonal():
    f = gauss_borel(moment_matrix(store(["1/3", "1/5"]), 5))
    assert f.diagonal("S", 0) == [1] * 5
    assert f.diagonal("S~", 0) == [1] * 5


def test_first_subdiagonal_is_minus_eta_for_classical_charlier():
    ms = store(["1/2"])
    f = gauss_borel(moment_matrix(ms, 3))
    assert f.Sd(1)[0] == -ms.moment(1, 1) / ms.moment(1, 0)
    assert abs(f.Sd(1)[0] + Q("1/2")) < Q("1e-25")


def test_inverse_first_subdiagonal_is_negated():
    f = gauss_borel(moment_matrix(store(["1/3", "1/5"]), 6))
    assert f.Sd(-1) == [-x for x in f.Sd(1)]
    assert f.Std(-1) == [-x for x in f.Std(1)]


rat = st.fractions(min_value=-3, max_value=3, max_denominator=7)


@given(st.lists(st.lists(rat, min_size=4, max_size=4), min_size=4, max_size=4))
def test_random_windows_reconstruct_or_report_first_zero_minor(rows):
    q = [[Q(f"{x.numerator}/{x.denominator}") for x in r] for r in rows]
    minors = [cofactor_det([r[:k] for r in rows[:k]]) for k in range(1, 5)]
    if any(m == 0 for m in minors):
        with pytest.raises(NonPerfectSystem) as e:
            gauss_borel(q)
        assert e.value.index == next(k for k, m in enumerate(minors, 1) if m == 0)
        return
    f = gauss_borel(q)
    assert reconstruct(f).tolist() == q
    prev = Fraction(1)
    for h, m in zip(f.H, minors):
        assert F(h) == m / prev
        prev = m
