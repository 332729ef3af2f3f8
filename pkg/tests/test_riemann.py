"""
Riemann 求解器测试
"""
import math
import os
import sys

import pytest
from scipy.optimize import bisect

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from exceptions import DegenerateShock, NoTwoShockRoot, VacuumFormation
from gas import GasConstants, GasState, specific_entropy
from riemann import (
    RiemannData,
    WaveKind,
    classify_wave_pattern,
    intermediate_states,
    max_rh_residual,
    rankine_hugoniot_residuals,
    rarefaction_state,
    shock_entropy_production,
    shock_speeds,
    solve_intermediate_pressure,
    solve_riemann,
    two_shock_residual,
)


def _data(left, right):
    return RiemannData(left=GasState(*left), right=GasState(*right))


SOD = _data((1.0, 0.0, 0.0, 1.0), (0.125, 0.0, 0.0, 0.1))
DIVERGING = _data((1.0, 0.0, 0.0, 1.0), (1.0, 0.0, 3.0, 1.0))
VACUUM = _data((1.0, 0.0, -10.0, 1.0), (1.0, 0.0, 10.0, 1.0))


class TestTwoShockClosedForm:
    """双激波区闭式公式"""

    def test_intermediate_pressure(self, reference_data, monatomic):
        p_M = solve_intermediate_pressure(reference_data, monatomic)
        assert p_M == pytest.approx(7700.164, abs=1e-2)
        assert abs(two_shock_residual(reference_data, p_M, monatomic)) < 1e-9

    def test_intermediate_states(self, reference_data, monatomic):
        p_M = solve_intermediate_pressure(reference_data, monatomic)
        v_M2, rho_minus, rho_plus = intermediate_states(reference_data, p_M, monatomic)
        assert v_M2 == pytest.approx(-75.972, abs=1e-2)
        assert rho_minus == pytest.approx(3.996, abs=1e-3)
        assert rho_plus == pytest.approx(39.981, abs=1e-3)

    def test_shock_speeds(self, reference_data, monatomic):
        p_M = solve_intermediate_pressure(reference_data, monatomic)
        intermediates = intermediate_states(reference_data, p_M, monatomic)
        sigma_minus, sigma_plus, sigma_M = shock_speeds(reference_data, p_M, intermediates, monatomic)
        assert sigma_minus == pytest.approx(-101.329, abs=1e-2)
        assert sigma_plus == pytest.approx(-67.957, abs=1e-2)
        assert sigma_minus < sigma_M < sigma_plus

    def test_solution_pattern(self, reference_data, monatomic):
        solution = solve_riemann(reference_data, monatomic)
        assert solution.closed_form
        assert solution.pattern.label == "S-C-S"
        assert solution.pattern.is_two_shock
        assert len(solution.states) == len(solution.waves) + 1
        assert solution.p_M == pytest.approx(7700.164, abs=1e-2)

    def test_identical_states_return_pressure(self, monatomic):
        state = (2.0, 0.0, 3.0, 5.0)
        data = _data(state, state)
        assert solve_intermediate_pressure(data, monatomic) == 5.0

    def test_diverging_data_has_no_two_shock_root(self, monatomic):
        with pytest.raises(NoTwoShockRoot):
            solve_intermediate_pressure(DIVERGING, monatomic)

    def test_matches_independent_bisection(self, monatomic):
        data = _data((1.0, 0.0, 0.0, 1.0), (1.0, 0.0, -10.0, 1.0))
        gamma = monatomic.adiabatic_exponent

        def shock_branch(p, state):
            a_k = 2.0 / ((gamma + 1.0) * state.rho)
            b_k = (gamma - 1.0) / (gamma + 1.0) * state.p
            return (p - state.p) * math.sqrt(a_k / (p + b_k))

        def equation(p):
            return shock_branch(p, data.left) + shock_branch(p, data.right) + data.right.v2 - data.left.v2

        expected = bisect(equation, max(data.left.p, data.right.p), 1e6, xtol=1e-12)
        assert solve_intermediate_pressure(data, monatomic) == pytest.approx(expected, rel=1e-10)
        assert solve_riemann(data, monatomic).p_M == pytest.approx(expected, rel=1e-10)

    def test_tangential_velocity_leaves_waves_unchanged(self, reference_data, monatomic):
        sheared = RiemannData(
            left=GasState(reference_data.left.rho, 4.0, reference_data.left.v2, reference_data.left.p),
            right=GasState(reference_data.right.rho, -7.0, reference_data.right.v2, reference_data.right.p),
        )
        plain = solve_riemann(reference_data, monatomic)
        shifted = solve_riemann(sheared, monatomic)
        assert shifted.p_M == plain.p_M
        assert [w.speed for w in shifted.waves] == [w.speed for w in plain.waves]
        assert [s.rho for s in shifted.states] == [s.rho for s in plain.states]
        assert shifted.states[1].v1 == 4.0
        assert shifted.states[2].v1 == -7.0

    def test_degenerate_shock(self, reference_data, monatomic):
        p_M = reference_data.left.p
        intermediates = (0.0, reference_data.left.rho, 20.0)
        with pytest.raises(DegenerateShock):
            shock_speeds(reference_data, p_M, intermediates, monatomic)


class TestGeneralPatterns:
    """通用波系"""

    def test_constant_data_has_no_waves(self, monatomic):
        state = (2.0, 0.0, 3.0, 5.0)
        solution = solve_riemann(_data(state, state), monatomic)
        assert solution.waves == ()
        assert solution.pattern.label == "none"
        assert solution.sample(1.0, -5.0) == solution.sample(1.0, 5.0)

    def test_sod_problem(self):
        g = GasConstants(c_v=2.5)
        solution = solve_riemann(SOD, g)
        assert not solution.closed_form
        assert solution.pattern.label == "R-C-S"
        assert solution.p_M == pytest.approx(0.30313, abs=1e-4)
        assert solution.v_M2 == pytest.approx(0.92745, abs=1e-4)
        head = solution.waves[0]
        assert head.speed_lo == pytest.approx(-(1.4 ** 0.5), rel=1e-12)
        assert solution.waves[-1].speed == pytest.approx(1.75216, abs=1e-4)

    def test_two_rarefactions(self, monatomic):
        pattern = classify_wave_pattern(DIVERGING, monatomic)
        assert pattern.left is WaveKind.RAREFACTION
        assert pattern.right is WaveKind.RAREFACTION
        assert not pattern.contact
        assert pattern.label == "R-R"

    def test_two_rarefactions_match_riemann_invariants(self, monatomic):
        gamma = monatomic.adiabatic_exponent
        c_outer = math.sqrt(gamma)
        jump = DIVERGING.right.v2 - DIVERGING.left.v2
        p_star = (1.0 - 0.25 * (gamma - 1.0) * jump / c_outer) ** (2.0 * gamma / (gamma - 1.0))
        rho_star = p_star ** (1.0 / gamma)
        c_star = math.sqrt(gamma * p_star / rho_star)

        solution = solve_riemann(DIVERGING, monatomic)
        assert solution.p_M == pytest.approx(p_star, rel=1e-10)
        assert solution.v_M2 == pytest.approx(1.5, rel=1e-12)
        star = solution.states[1]
        assert star.rho == pytest.approx(rho_star, rel=1e-10)

        left_fan, right_fan = solution.waves
        assert left_fan.speed_lo == pytest.approx(-c_outer, rel=1e-12)
        assert left_fan.speed_hi == pytest.approx(1.5 - c_star, rel=1e-10)
        assert right_fan.speed_lo == pytest.approx(1.5 + c_star, rel=1e-10)
        assert right_fan.speed_hi == pytest.approx(3.0 + c_outer, rel=1e-12)

        invariant = 2.0 * c_outer / (gamma - 1.0)
        for xi in (-1.0, -0.5, 0.0):
            inside = solution.sample(1.0, xi)
            c_inside = math.sqrt(gamma * inside.p / inside.rho)
            assert inside.p / inside.rho ** gamma == pytest.approx(1.0, rel=1e-10)
            assert inside.v2 + 2.0 * c_inside / (gamma - 1.0) == pytest.approx(invariant, rel=1e-10)
            assert specific_entropy(inside, monatomic) == pytest.approx(0.0, abs=1e-10)

    def test_contact_only(self, monatomic):
        data = _data((1.0, 0.0, 0.5, 1.0), (2.0, 0.0, 0.5, 1.0))
        solution = solve_riemann(data, monatomic)
        assert solution.pattern.label == "C"
        assert solution.waves[0].speed == pytest.approx(0.5)

    def test_vacuum(self, monatomic):
        with pytest.raises(VacuumFormation):
            solve_riemann(VACUUM, monatomic)

    def test_rarefaction_fan_is_continuous(self):
        g = GasConstants(c_v=2.5)
        solution = solve_riemann(SOD, g)
        fan = solution.waves[0]
        assert fan.kind is WaveKind.RAREFACTION
        head = rarefaction_state(fan, fan.speed_lo, g)
        tail = rarefaction_state(fan, fan.speed_hi, g)
        for name in ("rho", "v2", "p"):
            assert getattr(head, name) == pytest.approx(getattr(fan.pre_state, name), rel=1e-9, abs=1e-12)
            assert getattr(tail, name) == pytest.approx(getattr(fan.post_state, name), rel=1e-9, abs=1e-12)


class TestSampling:
    """自相似采样"""

    def test_regions(self, reference_data, monatomic):
        solution = solve_riemann(reference_data, monatomic)
        assert solution.sample(1.0, -200.0) == reference_data.left
        assert solution.sample(1.0, -90.0).rho == pytest.approx(3.996, abs=1e-3)
        assert solution.sample(1.0, -70.0).rho == pytest.approx(39.981, abs=1e-3)
        assert solution.sample(1.0, 0.0) == reference_data.right

    def test_depends_only_on_ratio(self, reference_data, monatomic):
        solution = solve_riemann(reference_data, monatomic)
        for x2 in (-150.0, -90.0, -70.0, 10.0):
            assert solution.sample(1.0, x2) == solution.sample(4.0, 4.0 * x2)


class TestFrontChecks:
    """波前守恒与熵检查"""

    def test_rankine_hugoniot(self, reference_data, monatomic):
        solution = solve_riemann(reference_data, monatomic)
        for wave in solution.waves:
            residuals = rankine_hugoniot_residuals(wave, monatomic)
            assert set(residuals) == {"mass", "momentum_1", "momentum_2", "energy"}
        assert max_rh_residual(solution, monatomic) <= 1e-9

    def test_shocks_produce_entropy(self, reference_data, monatomic):
        solution = solve_riemann(reference_data, monatomic)
        for wave in solution.waves:
            if wave.kind is WaveKind.SHOCK:
                assert shock_entropy_production(wave, monatomic) > 0
            else:
                assert abs(shock_entropy_production(wave, monatomic)) < 1e-6

    def test_rarefaction_has_no_residuals(self):
        g = GasConstants(c_v=2.5)
        solution = solve_riemann(SOD, g)
        assert rankine_hugoniot_residuals(solution.waves[0], g) == {}
        assert max_rh_residual(solution, g) <= 1e-9


class TestMirrorSymmetry:
    """x2 -> -x2 反射"""

    def test_reference_data(self, reference_data, monatomic):
        solution = solve_riemann(reference_data, monatomic)
        mirrored = solve_riemann(reference_data.mirrored(), monatomic)
        assert mirrored.p_M == pytest.approx(solution.p_M, rel=1e-12)
        assert mirrored.v_M2 == pytest.approx(-solution.v_M2, rel=1e-12)
        speeds = [w.speed for w in solution.waves]
        mirrored_speeds = [w.speed for w in mirrored.waves]
        assert mirrored_speeds == pytest.approx([-s for s in reversed(speeds)], rel=1e-10)
