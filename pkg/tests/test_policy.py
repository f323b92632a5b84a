"""Stopping rule: closed forms against the numeric oracles"""

import math

import pytest

from copestop.errors import ParameterDomainError, UnsupportedGainError
from copestop.experiments.acceptance import grid_params
from copestop.policy import (
    LinearGain,
    StopRewardIndex,
    compose_degree_growth_rate,
    decide,
    expected_discount,
    expected_weighted_discount,
    first_send_state,
    in_stopping_set,
    lookahead_rhs,
    smallest_stopping_state,
    threshold,
    transition_prob,
)
from copestop.policy.numeric import (
    expected_discount_quadrature,
    expected_weighted_discount_quadrature,
)
from copestop.schema import Decision, PolicyParams


def _params(lambda_d=10.0, lambda_t=5.0, delta=0.05, L=40, **gain):
    return PolicyParams(lambda_d=lambda_d, lambda_t=lambda_t, delta=delta, buffer_size_L=L, **gain)


class TestDegreeGrowthRate:
    """Composition of report- and data-driven degree growth"""

    @pytest.mark.parametrize(
        "args,expected",
        [
            ((0.0, 0.5, 0.0, 0.5), 0.0),
            ((2.0, 0.25, 4.0, 0.125), 1.0),
            ((10.0, 1.0, 0.0, 1.0), 10.0),
            ((0.0, 0.0, 10.0, 0.3), 3.0),
        ],
    )
    def test_examples(self, args, expected):
        assert compose_degree_growth_rate(*args) == pytest.approx(expected)

    @pytest.mark.parametrize(
        "args",
        [(-1.0, 0.5, 1.0, 0.5), (1.0, 0.5, -0.1, 0.5), (1.0, 1.5, 1.0, 0.5), (1.0, 0.5, 1.0, -0.2)],
    )
    def test_domain_errors(self, args):
        with pytest.raises(ParameterDomainError):
            compose_degree_growth_rate(*args)


class TestDiscountIntegrals:
    """E_T[e^{-LδT}] and E_T[T·e^{-LδT}]"""

    def test_expected_discount_examples(self):
        assert expected_discount(_params(lambda_t=5.0)) == pytest.approx(5 / 7)
        assert expected_discount(_params(lambda_t=1.0)) == pytest.approx(1 / 3)

    def test_weighted_discount_examples(self):
        assert expected_weighted_discount(_params(lambda_t=5.0)) == pytest.approx(5 / 49)
        assert expected_weighted_discount(_params(lambda_t=1.0)) == pytest.approx(1 / 9)

    def test_vanishing_discount_limit(self):
        params = _params(delta=1e-12)
        assert expected_discount(params) == pytest.approx(1.0, abs=1e-9)

    def test_fast_opportunity_limit(self):
        assert expected_weighted_discount(_params(lambda_t=1e9)) < 1e-8

    def test_quadrature_agrees_on_grid(self):
        for params in grid_params():
            assert expected_discount(params) == pytest.approx(
                expected_discount_quadrature(params), abs=1e-9
            )
            assert expected_weighted_discount(params) == pytest.approx(
                expected_weighted_discount_quadrature(params), abs=1e-9
            )


class TestThreshold:
    """Real-valued boundary d*"""

    def test_moderate_example(self, moderate_params):
        assert threshold(moderate_params) == pytest.approx(50 / 14)

    def test_static_degree_always_sends(self, static_params):
        assert threshold(static_params) == 0.0
        assert first_send_state(static_params) == 1

    def test_slow_opportunity_example(self, slow_opportunity_params):
        assert threshold(slow_opportunity_params) == pytest.approx(1 / 3)

    def test_intercept_shifts_threshold(self, moderate_params):
        shifted = _params(gain_slope_c=2.0, gain_intercept_b=1.0)
        assert threshold(shifted) == pytest.approx(threshold(moderate_params) - 0.5)

    def test_explicit_linear_gain_overrides_params(self, moderate_params):
        gain = LinearGain(slope=1.0, intercept=2.0)
        assert threshold(moderate_params, gain) == pytest.approx(50 / 14 - 2.0)

    def test_nonlinear_gain_rejected(self, moderate_params):
        with pytest.raises(UnsupportedGainError):
            threshold(moderate_params, lambda x: x * x)

    def test_monotone_comparative_statics(self):
        base = threshold(_params())
        assert threshold(_params(lambda_d=11.0)) >= base
        assert threshold(_params(lambda_t=6.0)) >= base
        assert threshold(_params(delta=0.06)) <= base
        assert threshold(_params(L=50)) <= base


class TestDecide:
    """Send iff d >= d*"""

    def test_below_minimum_degree_sends(self, slow_opportunity_params):
        assert decide(1, slow_opportunity_params) is Decision.SEND

    def test_wait_below_threshold(self, moderate_params):
        assert decide(3, moderate_params) is Decision.WAIT

    def test_send_at_threshold(self, moderate_params):
        assert decide(4, moderate_params) is Decision.SEND

    def test_tie_resolves_to_send(self):
        # d* = 4 exactly: λ_d·λ_t / (δL(δL + λ_t)) with δL = 2, λ_t = 2
        params = _params(lambda_d=16.0, lambda_t=2.0, delta=0.05, L=40)
        assert threshold(params) == pytest.approx(4.0)
        assert decide(4, params) is Decision.SEND

    def test_degree_zero_rejected(self, moderate_params):
        with pytest.raises(ParameterDomainError):
            decide(0, moderate_params)

    def test_first_send_state_is_ceiling(self):
        for params in grid_params():
            d_star = threshold(params)
            assert first_send_state(params) == max(1, math.ceil(d_star - 1e-9))


class TestTransitionProbability:
    def test_no_downward_moves(self):
        assert transition_prob(5, 3, 2.0, 1.0) == 0.0

    def test_stay_probability(self):
        assert transition_prob(2, 2, 0.5, 2.0) == pytest.approx(math.exp(-1.0))

    def test_normalised(self):
        total = sum(transition_prob(3, j, 1.5, 4.0) for j in range(3, 80))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ParameterDomainError):
            transition_prob(0, 1, 1.0, 1.0)
        with pytest.raises(ParameterDomainError):
            transition_prob(1, 2, -1.0, 1.0)


class TestLookahead:
    """One-stage look-ahead integral and stopping-set membership"""

    def test_static_degree_at_state_one(self, static_params):
        value = lookahead_rhs(1, static_params, index=StopRewardIndex.DEGREE_MINUS_ONE)
        assert value == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("d,expected", [(4, 3 * 5 / 7 + 10 * 5 / 49), (3, 2 * 5 / 7 + 10 * 5 / 49)])
    def test_shifted_index_examples(self, moderate_params, d, expected):
        value = lookahead_rhs(d, moderate_params, index=StopRewardIndex.DEGREE_MINUS_ONE)
        assert value == pytest.approx(expected, abs=1e-6)

    def test_degree_index_matches_closed_decomposition(self, moderate_params):
        # d·A + λ_d·B
        expected = 4 * 5 / 7 + 10 * 5 / 49
        assert lookahead_rhs(4, moderate_params) == pytest.approx(expected, abs=1e-6)

    def test_membership_reconciliation_at_boundary(self, moderate_params):
        # Under degree indexing the boundary is d* itself
        assert in_stopping_set(4, moderate_params)
        assert not in_stopping_set(3, moderate_params)
        # g(d-1) indexing shifts the comparison: g(3)=3 against 3.1633
        assert not in_stopping_set(4, moderate_params, index=StopRewardIndex.DEGREE_MINUS_ONE)

    def test_static_degree_state_one_is_member(self, static_params):
        assert in_stopping_set(1, static_params)
        assert in_stopping_set(1, static_params, index=StopRewardIndex.DEGREE_MINUS_ONE)

    def test_far_below_threshold_not_member(self):
        params = _params(lambda_d=200.0)
        assert threshold(params) > 50
        assert not in_stopping_set(5, params)

    def test_bisection_matches_closed_form(self, moderate_params, slow_opportunity_params):
        assert smallest_stopping_state(moderate_params) == 4
        assert smallest_stopping_state(slow_opportunity_params) == 1

    def test_rejects_degree_zero(self, moderate_params):
        with pytest.raises(ParameterDomainError):
            lookahead_rhs(0, moderate_params)

    def test_upward_closed_small_states(self, moderate_params):
        members = [in_stopping_set(d, moderate_params) for d in range(1, 21)]
        first = members.index(True)
        assert all(members[first:])

    @pytest.mark.slow
    def test_upward_closed_on_grid(self):
        for params in grid_params():
            members = [in_stopping_set(d, params) for d in range(1, 101)]
            first = members.index(True)
            assert all(members[first:]), params

    @pytest.mark.slow
    def test_boundary_matches_ceiling_on_grid(self):
        for params in grid_params():
            assert smallest_stopping_state(params) == first_send_state(params), params
