from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CHARLIER1, CHARLIER2, GEN_CHARLIER2, GEN_MEIXNER2, GEN_MEIXNER3, MEIXNER2
from mops.errors import InvalidParameters, WrongKind
from mops.families import (AlphaView, FamilySpec, adjudicate, charlier_closed_form, closed_form_table,
                           compatibility_diagonal, compatibility_levels, family_laws,
                           family_to_weight_system, forward_run, meixner2_alpha0, r_index,
                           validate_family, verify_family_lf)
from mops.kernel import Q
from mops.report import FAIL, PASS, SKIPPED

from oracles import F


def test_r_index_examples():
    assert r_index(2, 2) == 2
    assert r_index(1, 3) == 1
    assert r_index(7, 3) == 1


@given(st.integers(-20, 50), st.integers(1, 6))
def test_r_index_is_the_representative_in_one_to_p(n, p):
    r = r_index(n, p)
    assert 1 <= r <= p and (r - n) % p == 0


def test_generalized_charlier_theta():
    ws = family_to_weight_system(GEN_CHARLIER2)
    assert all(ws.theta(k) == k * (k + Q("1/2")) for k in range(6))


def test_validation():
    validate_family(FamilySpec("meixner2", 1, ("9/10",), None, ("2",)))
    for bad in (FamilySpec("meixner2", 1, ("1",), None, ("2",)),
                FamilySpec("charlier", 2, ("1/3", "1/3")),
                FamilySpec("charlier", 2, ("1/3",)),
                FamilySpec("gen-charlier", 2, ("1/3", "1/5")),
                FamilySpec("charlier", 1, ("1/3",), "1/2"),
                FamilySpec("meixner2", 2, ("1/4",), None, ("1/3", "1/3")),
                FamilySpec("meixner2", 1, ("1/4",), None, ("-2",)),
                FamilySpec("charlier", 0, ())):
        with pytest.raises(InvalidParameters):
            validate_family(bad)


def test_aliases_and_json_round_trip():
    fs = FamilySpec("Meixner-II", 2, "1/4", None, ("1/3", "2/5"))
    assert fs.kind == "meixner2"
    assert FamilySpec.from_json(fs.to_json()) == fs
    assert FamilySpec.from_json(GEN_CHARLIER2.to_json()) == GEN_CHARLIER2


def test_charlier_main_diagonal_closed_form(charlier2):
    table = charlier_closed_form(CHARLIER2, 3)
    assert table[0] == [Q("1/3"), Q("6/5"), Q("7/3"), Q("16/5")]
    assert all(charlier2.budget.accepts(table[0][n] - charlier2.rd.alphas[0][n]) for n in range(4))


def test_charlier_first_subdiagonal(charlier2):
    # column index 0 is the row-indexed alpha^(1)_1 = eta^(1)
    table = charlier_closed_form(CHARLIER2, 6)
    assert table[1][0] == Q("1/3")
    A = charlier2.rd.alphas
    assert all(charlier2.budget.accepts(table[k][n] - A[k][n]) for k in (1, 2) for n in range(7))


def test_classical_reduction(charlier1):
    table = charlier_closed_form(CHARLIER1, 5)
    assert [F(x) for x in table[1]] == [(m + 1) * Fraction(1, 2) for m in range(6)]
    assert all(charlier1.budget.accepts(table[1][m] - charlier1.rd.alphas[1][m]) for m in range(6))


def test_meixner_main_diagonal_closed_form(meixner2):
    A = meixner2.rd.alphas
    assert all(meixner2.budget.accepts(meixner2_alpha0(MEIXNER2, n) - A[0][n]) for n in range(8))


def test_closed_forms_only_for_plain_families():
    with pytest.raises(WrongKind):
        closed_form_table(GEN_CHARLIER2, 3)


def test_compatibility_levels_vanish(gen_charlier2):
    A = AlphaView(gen_charlier2.rd.alphas, 2, "col", gen_charlier2.rd.T.rows - 1)
    for d in compatibility_levels(GEN_CHARLIER2):
        assert all(gen_charlier2.budget.accepts(compatibility_diagonal(GEN_CHARLIER2, A, d, s))
                   for s in range(max(0, -d), 10))


def test_alpha_view_boundary_values(charlier2):
    A = AlphaView(charlier2.rd.alphas, 2, "col", 10)
    assert A(-1, 3) == 1 and A(-1, 0) == 0
    assert A(3, 2) == 0 and A(0, -1) == 0
    with pytest.raises(IndexError):
        A(0, 10)
    row = AlphaView(charlier2.rd.alphas, 2, "row", 10)
    assert row(1, 1) == A(1, 0)


@pytest.mark.parametrize("fs,fixture,n", [
    (CHARLIER2, "charlier2", 8), (GEN_CHARLIER2, "gen_charlier2", 10),
    (MEIXNER2, "meixner2", 7), (GEN_MEIXNER2, "gen_meixner2", 7), (GEN_MEIXNER3, "gen_meixner3", 9)])
def test_family_laws_validate(fs, fixture, n, request):
    pl = request.getfixturevalue(fixture)
    rep = verify_family_lf(fs, pl, n)
    assert rep.passed, rep.summary()


def test_printed_generalized_meixner_laws_are_erratum_candidates(gen_meixner2):
    rd = gen_meixner2.rd
    for law in family_laws(GEN_MEIXNER2):
        printed = [r for r in law.readings if r.name.startswith("printed")]
        law_printed = type(law)(law.name, printed, law.level, law.unknown)
        check, _ = adjudicate(GEN_MEIXNER2, law_printed, rd, 7, gen_meixner2.budget, rd.T.rows - 1)
        assert check.verdict == FAIL
        assert check.note.startswith("erratum candidate")


def test_adjudication_reports_convention(charlier2):
    laws = {law.name: law for law in family_laws(CHARLIER2)}
    check, results = adjudicate(CHARLIER2, laws["alpha^(1)_{pm+a} closed form"], charlier2.rd, 8,
                                charlier2.budget, charlier2.rd.T.rows - 1)
    assert check.verdict == PASS
    assert "printed/row" in check.note and "failing: printed/col" in check.note
    check, _ = adjudicate(CHARLIER2, laws["alpha^(l+1)_{pm+a} recursion"], charlier2.rd, 8,
                          charlier2.budget, charlier2.rd.T.rows - 1)
    assert check.verdict == SKIPPED


def test_forward_run_reproduces_factorization(gen_charlier2):
    rd = gen_charlier2.rd
    for law in family_laws(GEN_CHARLIER2):
        run = forward_run(GEN_CHARLIER2, law, rd, 8, rd.T.rows - 1)
        assert run
        assert all(abs(x - t) < Q("1e-20") for _, x, t in run)
