"""Tests for src.formulas: closed forms against direct normal-form commutators."""

import pytest

from src.config import Budgets
from src.errors import BudgetExceededError, PreconditionError
from src.formulas import (
    ACCEPTANCE_GROUPS,
    acceptance_groups,
    agreement_suite,
    left_normed_exponent,
    q2_class2,
    q2_general,
    q_ell_dihedral_quaternion,
    q_ell_general,
    q_ell_semidihedral,
    special_power_suite,
)
from src.metacyclic import nilpotency_class
from src.tally import CheckStatus


class TestGeneral:
    def test_q2_dihedral(self, d8):
        assert q2_general(d8, 1, 0, 0, 1).value == 2

    def test_q2_trivial_inputs(self, small_families):
        for G in small_families:
            assert q2_general(G, 0, 0, 0, 0).value == 0

    def test_q2_modular(self, m27):
        assert q2_general(m27, 1, 0, 0, 1).value == 6

    def test_q3_dihedral(self, d16):
        result = q_ell_general(d16, (1, 0, 0), (0, 1, 1))
        assert result.value == 4
        assert result.length == 3
        assert left_normed_exponent(d16, (1, 0, 0), (0, 1, 1)).value == 4

    def test_trailing_zero_beta_vanishes(self, sd16):
        assert q_ell_general(sd16, (3, 5, 2), (1, 1, 0)).value == 0

    def test_length_two_delegates(self, q16):
        assert q_ell_general(q16, (3, 1), (1, 0)) == q2_general(q16, 3, 1, 1, 0)

    def test_raw_representatives(self, d8):
        assert q2_general(d8, 5, 0, 0, 3) == q2_general(d8, 1, 0, 0, 1)

    def test_length_mismatch(self, d8):
        with pytest.raises(PreconditionError):
            q_ell_general(d8, (1, 0), (0,))
        with pytest.raises(PreconditionError):
            left_normed_exponent(d8, (1,), (0,))


class TestSpecialized:
    def test_dihedral_quaternion_examples(self):
        assert q_ell_dihedral_quaternion(2, 1, 2, (1, 0), (0, 1)).value == 2
        assert q_ell_dihedral_quaternion(3, 1, 3, (1, 0, 0), (0, 1, 1)).value == 4
        assert q_ell_dihedral_quaternion(3, 1, 3, (1, 0, 5), (0, 1, 0)).value == 0

    def test_dihedral_quaternion_reads_beta_mod_2(self):
        assert q_ell_dihedral_quaternion(4, 1, 3, (3, 1, 2), (1, 2, 3)) == q_ell_dihedral_quaternion(
            4, 1, 3, (3, 1, 2), (1, 0, 1)
        )

    def test_semidihedral_examples(self):
        assert q_ell_semidihedral(3, 2, (1, 0), (0, 1)).value == 6
        assert q_ell_semidihedral(3, 2, (1, 7), (0, 0)).value == 0
        assert q_ell_semidihedral(3, 3, (1, 0, 0), (0, 1, 1)).value == 4

    def test_class2_examples(self):
        assert q2_class2(3, 2, 1, 0, 0, 1).value == 6
        assert q2_class2(3, 2, 0, 0, 4, 2).value == 0
        assert q2_class2(2, 2, 1, 0, 0, 1).value == 2

    def test_class2_matches_direct(self, m27):
        for a1, b1, a2, b2 in [(1, 0, 0, 1), (2, 1, 5, 2), (7, 2, 3, 1)]:
            assert q2_class2(3, 2, a1, b1, a2, b2).value == left_normed_exponent(m27, (a1, a2), (b1, b2)).value

    def test_too_few_entries(self):
        with pytest.raises(PreconditionError):
            q_ell_dihedral_quaternion(3, 1, 3, (1, 0), (0, 1))
        with pytest.raises(PreconditionError):
            q_ell_semidihedral(3, 1, (1,), (0,))


class TestSuites:
    def test_acceptance_groups(self):
        groups = acceptance_groups()
        assert len(groups) == len(ACCEPTANCE_GROUPS)
        assert {G.label for G in groups} >= {"D8", "Q32", "SD32", "M(3,2)", "M(5,2)"}

    def test_agreement_on_small_families(self, small_families):
        for G in small_families:
            outcome = agreement_suite(G)
            assert outcome.status is CheckStatus.PASS, outcome.detail
            assert set(outcome.detail["lengths"]) == {str(ell) for ell in range(2, nilpotency_class(G) + 1)}

    def test_agreement_records_every_check(self, d16):
        lengths = agreement_suite(d16).detail["lengths"]
        assert lengths["3"]["tuples"] == 16**3
        assert {"direct_in_A", "general_vs_direct", "special_vs_general", "mod2_insensitive", "vanishing"} <= set(
            lengths["3"]
        )

    def test_agreement_explicit_length(self, m16):
        outcome = agreement_suite(m16, ell_max=2)
        assert list(outcome.detail["lengths"]) == ["2"]
        assert outcome.passed

    def test_agreement_budget(self, d8):
        with pytest.raises(BudgetExceededError):
            agreement_suite(d8, budgets=Budgets(max_evals=10))

    def test_special_power(self, d16, m27):
        assert special_power_suite(d16).passed
        assert special_power_suite(m27).passed

    def test_special_power_not_applicable(self, q8):
        assert special_power_suite(q8).status is CheckStatus.NOT_APPLICABLE
