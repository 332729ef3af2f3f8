"""
命令流水线

每个命令返回统一结构的报告 {command, inputs, outputs, residuals, verdicts}，
CLI 与 HTTP 接口共用。求解错误以 LabError 抛出，由调用方映射为退出码或状态码。
"""
import math
from typing import Any, Dict, Optional, Sequence

from config import config
from counterexample import FAN_BRACKET, SELF_SIMILAR_BRACKET, diperna_verdict, reproduce_theorem, sweep_cv
from entropy_rate import entropy_rate, entropy_rate_oracle, fan_from_solution, fan_from_subsolution, self_similar_rate
from exceptions import ValidationError
from fan_subsolution import admissible_interval, check_admissibility, solve_fan_subsolution, subsolution_entropy_states, sweep_rho1
from gas import GasConstants
from profile_construction import (
    EntropyProfile,
    PartitionSpec,
    default_sample_times,
    initial_total_entropy,
    minimal_lambda,
    require_valid_profile,
    terminal_value,
    total_energy_check,
    total_mass,
    verify_entropy_balance,
)
from riemann import RiemannData, WaveKind, max_rh_residual, shock_entropy_production, solve_riemann
from services.report_exporter import report_exporter
from utils import logger

ENTROPY_PRODUCTION_TOL = -1e-10
ORACLE_TOL = 1e-9


def _positive(name: str, value: float):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be positive")


def _oracle_window(validity: float):
    """取有效时间窗内的两个时刻"""
    if not math.isfinite(validity):
        return 1e-3, 2e-3
    return 0.25 * validity, 0.5 * validity


def run_riemann(data: RiemannData, g: GasConstants) -> Dict[str, Any]:
    solution = solve_riemann(data, g)
    productions = [shock_entropy_production(w, g) for w in solution.waves
                   if w.kind is not WaveKind.RAREFACTION]
    max_residual = max_rh_residual(solution, g)
    return report_exporter.build_envelope(
        "riemann",
        inputs={"data": data.to_dict(), "c_v": g.c_v},
        outputs=solution.to_dict(),
        residuals={"max_residual": max_residual, "shock_entropy_production": productions},
        verdicts={
            "pattern": solution.pattern.label,
            "two_shock": solution.pattern.is_two_shock,
            "constant": not solution.waves,
            "entropy_admissible": all(p >= ENTROPY_PRODUCTION_TOL for p in productions),
        },
    )


def run_rate(data: RiemannData, g: GasConstants, half_width: Optional[float] = None) -> Dict[str, Any]:
    half_width = config.lab.box_half_width if half_width is None else half_width
    _positive("L", half_width)
    solution = solve_riemann(data, g)
    rate = self_similar_rate(solution, g)
    outputs: Dict[str, Any] = {"self_similar_rate": rate, "pattern": solution.pattern.label}
    residuals: Dict[str, Any] = {}
    verdicts: Dict[str, Any] = {
        "self_similar_in_bracket": SELF_SIMILAR_BRACKET[0] < rate < SELF_SIMILAR_BRACKET[1],
    }
    if solution.pattern.kinds.count(WaveKind.RAREFACTION) == 0:
        fan = fan_from_solution(solution)
        report = entropy_rate(fan, g, half_width)
        t1, t2 = _oracle_window(report.l_validity)
        oracle = entropy_rate_oracle(fan, g, half_width, t1, t2)
        scale = max(1.0, abs(report.rate_per_width),
                    math.fsum(abs(c) for c in report.per_front_contributions))
        difference = abs(oracle - report.rate_per_width) / scale
        outputs.update({"report": report.to_dict(), "oracle_rate": oracle,
                        "oracle_window": [t1, t2]})
        residuals["oracle_relative_difference"] = difference
        verdicts["oracle_agrees"] = difference <= ORACLE_TOL
    return report_exporter.build_envelope(
        "rate",
        inputs={"data": data.to_dict(), "c_v": g.c_v, "L": half_width},
        outputs=outputs, residuals=residuals, verdicts=verdicts,
    )


def run_subsolution(data: RiemannData, rho1: float, g: GasConstants,
                    rho1_grid: Optional[Sequence[float]] = None,
                    half_width: Optional[float] = None) -> Dict[str, Any]:
    _positive("rho1", rho1)
    sub = solve_fan_subsolution(data, rho1, g)
    diagnostics = check_admissibility(sub, data, g)
    s_minus, s_1, s_plus = subsolution_entropy_states(sub, data, g)
    report = entropy_rate(fan_from_subsolution(sub), g, half_width) if not sub.degenerate else None
    outputs: Dict[str, Any] = {
        "subsolution": sub.to_dict(),
        "entropy_states": {"s_minus": s_minus, "s_1": s_1, "s_plus": s_plus},
        "fan_rate": report.rate_per_width if report else 0.0,
    }
    verdicts: Dict[str, Any] = {
        "admissible": diagnostics.all_passed,
        "fan_in_bracket": bool(report) and FAN_BRACKET[0] < report.rate_per_width < FAN_BRACKET[1],
    }
    if rho1_grid:
        for value in rho1_grid:
            _positive("rho1", value)
        points = sweep_rho1(data, rho1_grid, g)
        interval = admissible_interval(points)
        outputs["scan"] = [point.to_dict() for point in points]
        verdicts["admissible_interval"] = list(interval) if interval else None
    return report_exporter.build_envelope(
        "subsolution",
        inputs={"data": data.to_dict(), "c_v": g.c_v, "rho1": rho1,
                "rho1_grid": list(rho1_grid) if rho1_grid else None},
        outputs=outputs,
        residuals={"rankine_hugoniot": dict(sub.residuals), "max_residual": sub.max_residual,
                   "admissibility": diagnostics.to_dict()},
        verdicts=verdicts,
    )


def run_counterexample(data: RiemannData, rho1: float, g: GasConstants,
                       half_width: Optional[float] = None) -> Dict[str, Any]:
    _positive("rho1", rho1)
    if half_width is not None:
        _positive("L", half_width)
    report = reproduce_theorem(data, rho1, g, half_width)
    residuals = report.residuals()
    residuals["max_residual"] = report.max_residual
    verdicts = report.verdicts()
    verdicts["diperna"] = diperna_verdict(report) if report.is_positive else False
    return report_exporter.build_envelope(
        "counterexample", inputs=report.inputs(), outputs=report.outputs(),
        residuals=residuals, verdicts=verdicts,
    )


def run_sweep(data: RiemannData, rho1: float, cv_grid: Sequence[float],
              half_width: Optional[float] = None) -> Dict[str, Any]:
    _positive("rho1", rho1)
    reports = sweep_cv(data, rho1, cv_grid, half_width)
    points = []
    for report in reports:
        points.append({
            "c_v": report.c_v,
            "rho1": report.rho1,
            "self_similar_rate": report.self_similar_rate,
            "fan_rate": report.fan_rate,
            "verdict": report.verdict.value,
            "max_residual": report.max_residual,
            "claimed": report.claimed,
            "exploratory": report.exploratory,
            "cause": report.cause,
        })
    claimed = [r for r in reports if r.claimed]
    return report_exporter.build_envelope(
        "sweep",
        inputs={"data": data.to_dict(), "rho1": rho1, "cv_grid": list(cv_grid),
                "L": config.lab.box_half_width if half_width is None else half_width},
        outputs={"points": points},
        residuals={"max_residual": max((r.max_residual for r in reports if r.max_residual is not None),
                                       default=None)},
        verdicts={
            "claimed_points_positive": all(r.is_positive for r in claimed) if claimed else None,
            "positive_count": sum(1 for r in reports if r.is_positive),
            "point_count": len(reports),
        },
    )


def run_profile(partition: PartitionSpec, profile: EntropyProfile, g: GasConstants,
                epsilon: Optional[float] = None, margin: Optional[float] = None,
                Lambda: Optional[float] = None) -> Dict[str, Any]:
    validation = require_valid_profile(profile)
    epsilon = config.lab.epsilon if epsilon is None else epsilon
    margin = config.lab.lambda_margin if margin is None else margin
    if Lambda is None:
        Lambda = minimal_lambda(partition, profile, g, margin)
    times = default_sample_times(profile, epsilon)
    balance = verify_entropy_balance(partition, profile, g, epsilon, times)
    energy = total_energy_check(partition, profile, g, Lambda, times)
    logger.info(f"熵剖面构造：{len(partition.cells)} 个单元, Lambda = {Lambda:.6g}")
    return report_exporter.build_envelope(
        "profile",
        inputs={"partition": partition.to_dict(), "profile": profile.to_dict(), "c_v": g.c_v,
                "epsilon": epsilon, "margin": margin},
        outputs={
            "total_mass": total_mass(partition),
            "initial_entropy": initial_total_entropy(partition, g),
            "terminal_profile": terminal_value(profile),
            "Lambda": Lambda,
            "balance": balance.to_dict(),
            "energy": energy.to_dict(),
        },
        residuals={"max_relative_error": balance.max_relative_error,
                   "max_energy_error": energy.max_identity_error,
                   "max_residual": max(balance.max_relative_error, energy.max_identity_error)},
        verdicts={
            "profile_valid": validation.valid,
            "entropy_identity": balance.identity_holds,
            "energy_identity": energy.identity_holds,
            "kinetic_energy_positive": energy.min_kinetic_energy > 0,
            "total_entropy_nondecreasing": balance.nondecreasing,
        },
    )
