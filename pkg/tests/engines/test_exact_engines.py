"""
Black-box tests for the exact engines, brute_force and residue_dp.

Hand-enumerated cases pin the oracle; residue_dp is then checked against it
over generated rules.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.latqd.config import EngineConfig
from src.latqd.engines.exact_engines import brute_force, residue_dp
from src.latqd.lattice.errors import BudgetExceeded, InvalidBoxRadius
from src.latqd.lattice.rule import LatticeRule
from src.latqd.utilities import units

HAND_CASES = [
    (2, (1, 1), 1, (1, 0, 4)),
    (3, (1, 2), 1, (1, 0, 2)),
    (4, (1,), 4, (1, 0, 0, 0, 2)),
    (5, (1, 2), 2, (1, 0, 0, 4, 0)),
]


@st.composite
def small_instances(draw):
    N = draw(st.integers(min_value=2, max_value=50))
    s = draw(st.integers(min_value=1, max_value=3))
    d = draw(st.integers(min_value=1, max_value=4))
    g = draw(st.lists(st.integers(min_value=1, max_value=N - 1), min_size=s, max_size=s))
    return LatticeRule(N, g), d


class TestBruteForce:
    @pytest.mark.parametrize("N, g, d, expected", HAND_CASES)
    def test_hand_cases(self, N, g, d, expected):
        assert brute_force(LatticeRule(N, g), d).coeffs == expected

    def test_one_dimension_counts_multiples(self):
        # Dual vectors of N = 7, g = (3) are the multiples of 7.
        assert brute_force(LatticeRule(7, [3]), 14).coeffs[7] == 2
        assert brute_force(LatticeRule(7, [3]), 14).coeffs[14] == 2

    def test_total_bounded_by_box(self):
        W = brute_force(LatticeRule(11, [1, 3, 4]), 3)
        assert 1 <= W.total <= 7**3

    def test_exact_engine_has_no_residual(self):
        assert brute_force(LatticeRule(5, [1, 2]), 2).residual is None

    def test_enumeration_budget_enforced(self):
        config = EngineConfig(enumeration_budget=100)
        with pytest.raises(BudgetExceeded):
            brute_force(LatticeRule(5, [1, 2, 3]), 2, config)

    def test_invalid_radius_rejected(self):
        with pytest.raises(InvalidBoxRadius):
            brute_force(LatticeRule(5, [1, 2]), 0)

    def test_large_box_split_across_blocks(self):
        # 9^7 points do not fit one block, forcing the outer product loop.
        rule = LatticeRule(17, [1, 2, 3, 5, 7, 11, 13])
        W = brute_force(rule, 4)
        assert W.coeffs == residue_dp(rule, 4).coeffs


class TestResidueDP:
    @pytest.mark.parametrize("N, g, d, expected", HAND_CASES)
    def test_hand_cases(self, N, g, d, expected):
        assert residue_dp(LatticeRule(N, g), d).coeffs == expected

    def test_op_budget_enforced(self):
        config = EngineConfig(op_budget=1000)
        with pytest.raises(BudgetExceeded):
            residue_dp(LatticeRule(101, [1, 5]), 3, config)

    @settings(max_examples=100, deadline=None)
    @given(small_instances())
    def test_agrees_with_brute_force(self, instance):
        rule, d = instance
        assert residue_dp(rule, d) == brute_force(rule, d)

    @settings(max_examples=50, deadline=None)
    @given(small_instances(), st.data())
    def test_invariant_under_symmetries(self, instance, data):
        rule, d = instance
        reference = residue_dp(rule, d).coeffs
        order = data.draw(st.permutations(range(rule.s)))
        j = data.draw(st.integers(0, rule.s - 1))
        assert residue_dp(rule.permute(order), d).coeffs == reference
        assert residue_dp(rule.negate_coordinate(j), d).coeffs == reference

    @settings(max_examples=50, deadline=None)
    @given(small_instances(), st.data())
    def test_invariant_under_units(self, instance, data):
        rule, d = instance
        unit = data.draw(st.sampled_from(units(rule.N)))
        assert residue_dp(rule.apply_unit(unit), d).coeffs == residue_dp(rule, d).coeffs
