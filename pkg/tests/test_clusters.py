import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ribboncalc.clusters import (
    AdmissibleClusterSpec,
    _case_counts,
    closed_count,
    count_admissible,
    count_by_recurrence,
)
from ribboncalc.combclasses import merge_coefficient
from ribboncalc.errors import DomainMismatch, TooLarge


class TestSpec:
    def test_accepts_plain_values(self):
        spec = AdmissibleClusterSpec([0, 2, 1])
        assert spec.rho == (0, 2, 1)
        assert spec.size == 3
        assert spec.excess == 3

    def test_leading_loop_value_allowed(self):
        assert AdmissibleClusterSpec([-1, 2]).excess == 1

    def test_rejects_empty(self):
        with pytest.raises(DomainMismatch):
            AdmissibleClusterSpec([])

    @pytest.mark.parametrize("rho", [[-2, 1], [0, -1], [1, 0, -1]])
    def test_rejects_bad_excess(self, rho):
        with pytest.raises(DomainMismatch):
            AdmissibleClusterSpec(rho)

    def test_equality(self):
        assert AdmissibleClusterSpec([1, 1]) == AdmissibleClusterSpec((1, 1))
        assert AdmissibleClusterSpec([1]) != AdmissibleClusterSpec([2])


class TestBruteForce:
    @pytest.mark.parametrize("r", [0, 1, 2])
    def test_single_hole_is_unique(self, r):
        assert count_admissible([r]) == 1

    def test_two_holes_smallest(self):
        assert count_admissible([0, 0]) == 3

    @pytest.mark.parametrize("rho", [(0, 1), (1, 0), (1, 1), (0, 2)])
    def test_two_holes_formula(self, rho):
        assert count_admissible(rho) == 2 * sum(rho) + 3

    def test_three_holes_smallest(self):
        assert count_admissible([0, 0, 0]) == 15

    def test_loop_step_counts_too(self):
        # the definition keeps making sense with a -1 up front; these are
        # the recursion's intermediate configurations
        assert count_admissible([-1, 1]) == 3
        assert count_admissible([-1, 2, 1]) == 63

    def test_accepts_spec_instances(self):
        assert count_admissible(AdmissibleClusterSpec([0, 0])) == 3

    def test_side_budget_enforced(self):
        with pytest.raises(TooLarge):
            count_admissible([3, 3], max_sides=20)
        with pytest.raises(TooLarge):
            count_admissible([2, 1, 1])  # 34 sides against the default 30


class TestRecurrence:
    @pytest.mark.parametrize("rho", [(0, 0), (3, 2), (0, 7), (4, 4)])
    def test_pair_formula(self, rho):
        assert count_by_recurrence(rho) == 2 * sum(rho) + 3

    @pytest.mark.parametrize("rho", [(0, 0, 0), (-1, 2, 1), (1, 0, 2), (0, 3, 0)])
    def test_triple_formula(self, rho):
        s = sum(rho)
        assert count_by_recurrence(rho) == (2 * s + 3) * (2 * s + 5)

    def test_single_hole(self):
        assert count_by_recurrence([0]) == 1
        assert count_by_recurrence([-1]) == 1

    def test_depends_only_on_first_pair_sum(self):
        for rest in [(), (0,), (1,), (0, 2)]:
            reference = count_by_recurrence((0, 2) + rest)
            assert count_by_recurrence((1, 1) + rest) == reference
            assert count_by_recurrence((2, 0) + rest) == reference

    def test_vertex_case_needs_excess_at_the_shared_slot(self):
        # a shared vertex must absorb excess, so a lone excess-0 third
        # hole kills the case
        for r1, r2 in [(0, 0), (1, 0), (1, 1), (0, 2)]:
            assert _case_counts((r1, r2, 0))[1] == 0
        assert _case_counts((0, 0, 1))[1] > 0

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(0, 3), min_size=1, max_size=5))
    def test_matches_closed_form(self, rho):
        expected = merge_coefficient(sum(rho), len(rho))
        assert count_by_recurrence(rho) == expected


class TestThreeWayAgreement:
    @pytest.mark.parametrize(
        "rho",
        [
            rho
            for h in (1, 2, 3)
            for rho in itertools.product(range(3), repeat=h)
            if sum(rho) <= 2
        ],
    )
    def test_small_grid(self, rho):
        brute = count_admissible(rho)
        assert brute == count_by_recurrence(rho)
        assert brute == merge_coefficient(sum(rho), len(rho))

    def test_brute_force_sum_dependence(self):
        # the proof's key symmetry, at the smallest sizes the search can
        # reach: only the sum of the first two excesses matters
        assert count_admissible((0, 2)) == count_admissible((1, 1))
        values = {
            count_admissible((0, 2, 0)),
            count_admissible((1, 1, 0)),
            count_admissible((2, 0, 0)),
        }
        assert len(values) == 1


class TestClosedForm:
    def test_matches_recurrence_on_a_grid(self):
        for h in (1, 2, 3):
            for rho in itertools.product(range(3), repeat=h):
                assert closed_count(rho) == count_by_recurrence(rho)

    def test_negative_total_is_out_of_range(self):
        with pytest.raises(DomainMismatch):
            closed_count([-1])
