"""
熵剖面构造测试
"""
import math
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from exceptions import EpsilonOutOfRange, InfeasibleLambda, ValidationError
from gas import GasConstants
from profile_construction import (
    EntropyProfile,
    PartitionSpec,
    construct_state,
    default_sample_times,
    entropy_field,
    initial_total_entropy,
    minimal_lambda,
    profile_value,
    require_valid_profile,
    temperature_field,
    terminal_value,
    total_energy_check,
    total_entropy,
    total_mass,
    validate_profile,
    verify_entropy_balance,
)

UNIT_CELL = PartitionSpec.from_rows([(1.0, 1.0, 1.0)])
TWO_CELLS = PartitionSpec.from_rows([(1.0, 1.0, 1.0), (1.0, 2.0, 1.0)])


def _step(delta=0.5, T=2.0, breakpoints=(0.5,), values=(1.0,)):
    return EntropyProfile(delta=delta, T=T, breakpoints=breakpoints, values=values)


class TestProfile:
    """剖面取值与校验"""

    def test_right_continuous(self):
        profile = _step()
        assert profile_value(profile, 0.25) == 0.0
        assert profile_value(profile, 0.5) == 1.0
        assert profile_value(profile, 1.9) == 1.0

    def test_terminal_value_excludes_T(self):
        profile = _step(breakpoints=(0.5, 2.0), values=(1.0, 3.0))
        assert terminal_value(profile) == 1.0
        assert profile_value(profile, 2.0) == 3.0

    def test_valid_step(self):
        assert validate_profile(_step()).valid

    def test_decreasing_profile(self):
        result = validate_profile(_step(breakpoints=(0.5, 1.0), values=(1.0, 0.5)))
        assert not result.valid
        assert result.violations[0].startswith("nondecreasing")

    def test_nonzero_before_delta(self):
        result = validate_profile(_step(breakpoints=(0.25, 0.5), values=(0.5, 1.0)))
        assert not result.valid
        assert result.violations[0].startswith("onset")
        with pytest.raises(ValidationError):
            require_valid_profile(_step(breakpoints=(0.25,), values=(0.5,)))

    def test_breakpoints_must_increase(self):
        with pytest.raises(ValidationError):
            _step(breakpoints=(1.0, 0.5), values=(1.0, 2.0))

    def test_sample_times_avoid_breakpoints(self):
        profile = _step(breakpoints=(0.5, 1.2), values=(1.0, 1.5))
        times = default_sample_times(profile, 0.1)
        assert times[0] == 0.0
        assert all(0 <= t <= profile.T - 0.1 for t in times)
        for t in times[1:]:
            assert t not in profile.breakpoints
            assert t + 0.1 not in profile.breakpoints


class TestFields:
    """单元场"""

    def test_temperature_before_onset(self):
        profile = _step()
        partition = PartitionSpec.from_rows([(1.0, 1.0, 2.0)])
        assert temperature_field(partition, profile, 0.25)[0] == 2.0

    def test_temperature_after_onset(self):
        partition = PartitionSpec.from_rows([(1.0, 1.0, 2.0)])
        assert temperature_field(partition, _step(), 1.0)[0] == pytest.approx(2.0 * math.e)
        log_two = _step(values=(math.log(2.0),))
        partition = PartitionSpec.from_rows([(1.0, 1.0, 3.0)])
        assert temperature_field(partition, log_two, 1.0)[0] == pytest.approx(6.0)

    def test_entropy_field(self):
        g = GasConstants(1.5)
        assert entropy_field(UNIT_CELL, _step(), g, 0.25)[0] == 0.0
        assert entropy_field(UNIT_CELL, _step(), g, 1.0)[0] == pytest.approx(1.5)

    def test_total_entropy_before_onset(self):
        g = GasConstants(1.5)
        partition = PartitionSpec.from_rows([(1.0, 1.0, 2.0), (2.0, 0.5, 3.0)])
        assert total_entropy(partition, _step(), g, 0.1) == pytest.approx(
            initial_total_entropy(partition, g), rel=1e-15)

    def test_total_mass(self):
        assert total_mass(TWO_CELLS) == 3.0

    def test_invalid_partition(self):
        with pytest.raises(ValidationError):
            PartitionSpec.from_rows([(1.0, -1.0, 1.0)])
        with pytest.raises(ValidationError):
            PartitionSpec.from_rows([])


class TestEnergy:
    """总能量与 Lambda"""

    def test_minimal_lambda_single_cell(self):
        g = GasConstants(1.5)
        flat = _step(breakpoints=(), values=())
        assert minimal_lambda(UNIT_CELL, flat, g, 0.1) == pytest.approx(1.65)

    def test_minimal_lambda_doubles_with_log_two(self):
        g = GasConstants(1.5)
        profile = _step(values=(math.log(2.0),))
        assert minimal_lambda(UNIT_CELL, profile, g, 0.1) == pytest.approx(3.3)

    def test_invalid_margin(self):
        with pytest.raises(ValidationError):
            minimal_lambda(UNIT_CELL, _step(), GasConstants(1.5), 0.0)

    def test_energy_identity(self):
        g = GasConstants(1.5)
        profile = _step()
        Lambda = minimal_lambda(TWO_CELLS, profile, g)
        times = default_sample_times(profile, 0.1)
        diagnostics = total_energy_check(TWO_CELLS, profile, g, Lambda, times)
        assert diagnostics.identity_holds
        assert diagnostics.min_kinetic_energy > 0
        assert len(diagnostics.states) == len(times)

    def test_infeasible_lambda(self):
        g = GasConstants(1.5)
        with pytest.raises(InfeasibleLambda):
            total_energy_check(UNIT_CELL, _step(), g, 1.0, [0.0, 1.0])

    def test_construct_state_momentum(self):
        g = GasConstants(1.5)
        state = construct_state(UNIT_CELL, _step(), g, 3.5, 0.0)
        assert state.e_kin[0] == pytest.approx(2.0)
        assert state.momentum[0] == pytest.approx(2.0)


class TestEntropyBalance:
    """总熵恒等式"""

    def test_single_cell_jump(self):
        g = GasConstants(1.5)
        diagnostics = verify_entropy_balance(UNIT_CELL, _step(), g, 0.1, [0.25, 1.0])
        assert diagnostics.identity_holds
        assert diagnostics.increments[0]["increment"] == pytest.approx(1.5)

    def test_two_cells(self):
        g = GasConstants(1.5)
        profile = _step(values=(2.0,))
        diagnostics = verify_entropy_balance(TWO_CELLS, profile, g, 0.1, [0.25, 1.0])
        assert diagnostics.total_mass == 3.0
        assert diagnostics.increments[0]["increment"] == pytest.approx(9.0)
        assert diagnostics.nondecreasing
        assert all(s["mass"] == 3.0 for s in diagnostics.samples)

    def test_shifted_increment_crosses_onset(self):
        g = GasConstants(1.5)
        diagnostics = verify_entropy_balance(TWO_CELLS, _step(), g, 0.1, [0.3, 0.45])
        assert diagnostics.increments[0]["increment"] == pytest.approx(0.0, abs=1e-12)
        shifted = diagnostics.shifted_increments[0]
        assert shifted["expected"] == pytest.approx(1.5 * 3.0)
        assert shifted["increment"] == pytest.approx(shifted["expected"])

    @pytest.mark.parametrize("epsilon", [0.0, 0.5, 0.7])
    def test_epsilon_out_of_range(self, epsilon):
        with pytest.raises(EpsilonOutOfRange):
            verify_entropy_balance(UNIT_CELL, _step(), GasConstants(1.5), epsilon, [0.0])

    def test_sample_beyond_horizon(self):
        with pytest.raises(ValidationError):
            verify_entropy_balance(UNIT_CELL, _step(), GasConstants(1.5), 0.1, [1.95])
