"""
反例复现测试
"""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from counterexample import (
    CounterexampleReport,
    Verdict,
    dimension_extension_rate,
    diperna_verdict,
    reproduce_theorem,
    sweep_cv,
)
from exceptions import ValidationError
from gas import GasConstants, GasState
from riemann import RiemannData


@pytest.fixture
def report(reference_data, monatomic):
    return reproduce_theorem(reference_data, 14.0, monatomic)


class TestReproduceTheorem:
    """c_v = 3/2 的完整流程"""

    def test_positive_verdict(self, report):
        assert report.verdict is Verdict.SELF_SIMILAR_NOT_ENTROPY_RATE_ADMISSIBLE
        assert report.is_positive
        assert report.cause is None
        assert report.claimed
        assert not report.exploratory

    def test_rates(self, report):
        assert report.self_similar_rate == pytest.approx(-1661.456, abs=1e-2)
        assert report.fan_rate == pytest.approx(867.268, abs=1e-2)
        assert report.rate_bounds_check == {
            "self_similar_in_bracket": True,
            "fan_in_bracket": True,
            "fan_exceeds_self_similar": True,
        }

    def test_residuals(self, report):
        assert report.shock_residual <= 1e-9
        assert report.subsolution_residual <= 1e-8
        assert report.max_residual == max(report.shock_residual, report.subsolution_residual)
        assert report.diagnostics.all_passed

    def test_report_sections(self, report):
        payload = report.to_dict()
        assert set(payload) == {"inputs", "outputs", "residuals", "verdicts"}
        assert payload["verdicts"]["verdict"] == "SelfSimilarNotEntropyRateAdmissible"
        assert payload["inputs"]["rho1"] == 14.0
        assert payload["outputs"]["self_similar"]["pattern"] == "S-C-S"

    def test_deterministic(self, reference_data, monatomic, report):
        again = reproduce_theorem(reference_data, 14.0, monatomic)
        assert again.self_similar_rate == report.self_similar_rate
        assert again.fan_rate == report.fan_rate

    def test_cv_one(self, reference_data):
        result = reproduce_theorem(reference_data, 14.0, GasConstants(c_v=1.0))
        assert result.is_positive
        assert result.claimed
        assert result.fan_rate > result.self_similar_rate

    def test_constant_data_is_inconclusive(self, monatomic):
        state = GasState(rho=1.0, v1=0.0, v2=0.0, p=2.0)
        result = reproduce_theorem(RiemannData(left=state, right=state), 14.0, monatomic)
        assert result.verdict is Verdict.INCONCLUSIVE
        assert "two-shock" in result.cause

    def test_solver_failure_is_inconclusive(self, monatomic):
        data = RiemannData(left=GasState(1.0, 0.0, -10.0, 1.0), right=GasState(1.0, 0.0, 10.0, 1.0))
        result = reproduce_theorem(data, 14.0, monatomic)
        assert result.verdict is Verdict.INCONCLUSIVE
        assert result.cause.startswith("VacuumFormation")


class TestSweep:
    """c_v 扫描"""

    def test_empty_grid(self, reference_data):
        assert sweep_cv(reference_data, 14.0, []) == []

    def test_single_point_matches_direct_run(self, reference_data, report):
        [point] = sweep_cv(reference_data, 14.0, [1.5])
        assert point.self_similar_rate == report.self_similar_rate
        assert point.fan_rate == report.fan_rate

    def test_order_and_labels(self, reference_data):
        grid = [1.5, 1.25, 1.0]
        points = sweep_cv(reference_data, 14.0, grid)
        assert [p.c_v for p in points] == grid
        assert [p.claimed for p in points] == [True, False, True]
        assert points[1].exploratory
        assert points[1].verdict in (Verdict.SELF_SIMILAR_NOT_ENTROPY_RATE_ADMISSIBLE, Verdict.INCONCLUSIVE)
        assert points[0].is_positive and points[2].is_positive

    def test_invalid_cv_does_not_stop_sweep(self, reference_data):
        points = sweep_cv(reference_data, 14.0, [-1.0, 1.5])
        assert points[0].verdict is Verdict.INCONCLUSIVE
        assert points[0].cause.startswith("ValidationError")
        assert points[1].is_positive


class TestDiPerna:
    """总熵比较"""

    def test_subsolution_has_more_entropy(self, report):
        assert diperna_verdict(report)

    def test_equal_fans_fail(self, report):
        same = CounterexampleReport(
            data=report.data, c_v=report.c_v, rho1=report.rho1, half_width=report.half_width,
            self_similar_fan=report.self_similar_fan, subsolution_fan=report.self_similar_fan,
        )
        assert not diperna_verdict(same)

    def test_missing_fans(self, reference_data):
        empty = CounterexampleReport(data=reference_data, c_v=1.5, rho1=14.0, half_width=1e4)
        assert not diperna_verdict(empty)


class TestDimensionExtension:
    """常数延拓到高维"""

    def test_rates_scale_with_box(self, report):
        base = dimension_extension_rate(report, 0)
        assert base["self_similar_rate"] == report.self_similar_rate
        assert base["self_similar_box_rate"] == pytest.approx(2e4 * report.self_similar_rate)
        extended = dimension_extension_rate(report, 1)
        assert extended["fan_rate"] == report.fan_rate
        assert extended["fan_box_rate"] == pytest.approx(4e8 * report.fan_rate)
        assert extended["fan_box_rate"] > extended["self_similar_box_rate"]

    def test_negative_dims(self, report):
        with pytest.raises(ValidationError):
            dimension_extension_rate(report, -1)
