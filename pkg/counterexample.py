"""
反例复现

对给定 Riemann 数据比较一维自相似解与扇形子解的熵产生率：
子解严格更大即说明自相似解不满足熵率准则。
"""
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from config import config
from entropy_rate import (
    EntropyRateReport,
    PiecewiseFan,
    compare_rates,
    dafermos_dominates,
    diperna_totals,
    entropy_rate,
    fan_from_solution,
    fan_from_subsolution,
)
from exceptions import LabError, ValidationError
from fan_subsolution import AdmissibilityDiagnostics, FanSubsolution, check_admissibility, solve_fan_subsolution
from gas import GasConstants
from riemann import RiemannData, SelfSimilarSolution, max_rh_residual, solve_riemann
from utils import logger

# 已知的单位宽度熵产生率区间（开区间）
SELF_SIMILAR_BRACKET = (-1662.0, -1661.0)
FAN_BRACKET = (867.0, 868.0)
# 文献中给出结论的 c_v 取值，其余扫描点仅作探索
CLAIMED_CV = (1.0, 1.5)

SHOCK_RESIDUAL_TOL = 1e-9
SUBSOLUTION_RESIDUAL_TOL = 1e-8


class Verdict(enum.Enum):
    SELF_SIMILAR_NOT_ENTROPY_RATE_ADMISSIBLE = "SelfSimilarNotEntropyRateAdmissible"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class CounterexampleReport:
    """反例报告"""
    data: RiemannData
    c_v: float
    rho1: float
    half_width: float
    self_similar_rate: Optional[float] = None
    fan_rate: Optional[float] = None
    rate_bounds_check: Dict[str, bool] = field(default_factory=dict)
    verdict: Verdict = Verdict.INCONCLUSIVE
    cause: Optional[str] = None
    claimed: bool = False
    solution: Optional[SelfSimilarSolution] = None
    subsolution: Optional[FanSubsolution] = None
    diagnostics: Optional[AdmissibilityDiagnostics] = None
    self_similar_fan: Optional[PiecewiseFan] = None
    subsolution_fan: Optional[PiecewiseFan] = None
    self_similar_report: Optional[EntropyRateReport] = None
    fan_report: Optional[EntropyRateReport] = None
    shock_residual: Optional[float] = None
    subsolution_residual: Optional[float] = None

    @property
    def is_positive(self) -> bool:
        return self.verdict is Verdict.SELF_SIMILAR_NOT_ENTROPY_RATE_ADMISSIBLE

    @property
    def exploratory(self) -> bool:
        return not self.claimed

    @property
    def max_residual(self) -> Optional[float]:
        values = [v for v in (self.shock_residual, self.subsolution_residual) if v is not None]
        return max(values) if values else None

    def inputs(self) -> Dict[str, Any]:
        return {
            "data": self.data.to_dict(),
            "c_v": self.c_v,
            "rho1": self.rho1,
            "L": self.half_width,
        }

    def outputs(self) -> Dict[str, Any]:
        return {
            "self_similar_rate": self.self_similar_rate,
            "fan_rate": self.fan_rate,
            "self_similar": self.solution.to_dict() if self.solution else None,
            "subsolution": self.subsolution.to_dict() if self.subsolution else None,
            "self_similar_report": self.self_similar_report.to_dict() if self.self_similar_report else None,
            "fan_report": self.fan_report.to_dict() if self.fan_report else None,
        }

    def residuals(self) -> Dict[str, Any]:
        return {
            "shock_rankine_hugoniot": self.shock_residual,
            "subsolution_rankine_hugoniot": self.subsolution_residual,
            "admissibility": self.diagnostics.to_dict() if self.diagnostics else None,
        }

    def verdicts(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "cause": self.cause,
            "rate_bounds_check": dict(self.rate_bounds_check),
            "claimed": self.claimed,
            "exploratory": self.exploratory,
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inputs": self.inputs(),
            "outputs": self.outputs(),
            "residuals": self.residuals(),
            "verdicts": self.verdicts(),
        }


def _in_bracket(value: Optional[float], bracket) -> bool:
    return value is not None and bracket[0] < value < bracket[1]


def _is_claimed(c_v: float) -> bool:
    return any(math.isclose(c_v, claimed, rel_tol=0.0, abs_tol=1e-12) for claimed in CLAIMED_CV)


def reproduce_theorem(data: RiemannData, rho1: float, g: GasConstants,
                      half_width: Optional[float] = None) -> CounterexampleReport:
    """
    完整流程：自相似解、扇形子解、两者的熵产生率与严格比较

    求解失败不抛出，报告为 Inconclusive 并记录原因。
    """
    half_width = config.lab.box_half_width if half_width is None else half_width
    report = CounterexampleReport(
        data=data, c_v=g.c_v, rho1=rho1, half_width=half_width,
        claimed=_is_claimed(g.c_v),
    )
    try:
        _run_pipeline(report, g)
    except LabError as e:
        report.verdict = Verdict.INCONCLUSIVE
        report.cause = f"{e.code}: {e.message}"
        logger.warning(f"反例流程未完成 (c_v = {g.c_v}): {report.cause}")
    return report


def _run_pipeline(report: CounterexampleReport, g: GasConstants):
    data = report.data
    solution = solve_riemann(data, g)
    report.solution = solution
    if not solution.pattern.is_two_shock:
        report.cause = f"data not in the two-shock regime (pattern {solution.pattern.label})"
        return

    report.shock_residual = max_rh_residual(solution, g)
    report.self_similar_fan = fan_from_solution(solution)
    report.self_similar_report = entropy_rate(report.self_similar_fan, g, report.half_width)
    report.self_similar_rate = report.self_similar_report.rate_per_width

    sub = solve_fan_subsolution(data, report.rho1, g)
    report.subsolution = sub
    report.subsolution_residual = sub.max_residual
    report.diagnostics = check_admissibility(sub, data, g)
    report.subsolution_fan = fan_from_subsolution(sub)
    report.fan_report = entropy_rate(report.subsolution_fan, g, report.half_width)
    report.fan_rate = report.fan_report.rate_per_width

    report.rate_bounds_check = {
        "self_similar_in_bracket": _in_bracket(report.self_similar_rate, SELF_SIMILAR_BRACKET),
        "fan_in_bracket": _in_bracket(report.fan_rate, FAN_BRACKET),
        "fan_exceeds_self_similar": dafermos_dominates(report.self_similar_report, report.fan_report),
    }

    failed = []
    if report.shock_residual > SHOCK_RESIDUAL_TOL:
        failed.append(f"shock residual {report.shock_residual:.3e}")
    if report.subsolution_residual > SUBSOLUTION_RESIDUAL_TOL:
        failed.append(f"subsolution residual {report.subsolution_residual:.3e}")
    if not report.diagnostics.all_passed:
        names = [c.name for c in report.diagnostics.checks if not c.passed]
        failed.append("admissibility failed: " + ", ".join(names))
    if not report.rate_bounds_check["fan_exceeds_self_similar"]:
        failed.append(f"ordering {compare_rates(report.self_similar_report, report.fan_report).value}")

    if failed:
        report.verdict = Verdict.INCONCLUSIVE
        report.cause = "; ".join(failed)
    else:
        report.verdict = Verdict.SELF_SIMILAR_NOT_ENTROPY_RATE_ADMISSIBLE
    logger.info(f"c_v = {g.c_v}, rho1 = {report.rho1}: 自相似 {report.self_similar_rate:.6f}, "
                f"子解 {report.fan_rate:.6f}, 结论 {report.verdict.value}")


def _sweep_point(data: RiemannData, rho1: float, c_v: float,
                 half_width: Optional[float]) -> CounterexampleReport:
    try:
        g = GasConstants(c_v=c_v)
    except ValidationError as e:
        report = CounterexampleReport(
            data=data, c_v=c_v, rho1=rho1,
            half_width=config.lab.box_half_width if half_width is None else half_width,
        )
        report.cause = f"{e.code}: {e.message}"
        return report
    return reproduce_theorem(data, rho1, g, half_width)


def sweep_cv(data: RiemannData, rho1: float, cv_grid: Sequence[float],
             half_width: Optional[float] = None) -> List[CounterexampleReport]:
    """逐个 c_v 复现，线程池并行，结果保持网格顺序"""
    grid = list(cv_grid)
    if not grid:
        return []
    workers = max(1, min(config.lab.sweep_workers, len(grid)))
    logger.info(f"c_v 扫描: {len(grid)} 个点, {workers} 个线程")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda c_v: _sweep_point(data, rho1, c_v, half_width), grid))


def diperna_verdict(report: CounterexampleReport, samples: int = 8) -> bool:
    """在有效时间窗内取样，子解总熵始终严格更大时为真"""
    if report.self_similar_fan is None or report.subsolution_fan is None:
        return False
    g = GasConstants(c_v=report.c_v)
    horizon = min(report.self_similar_fan.validity_time(report.half_width),
                  report.subsolution_fan.validity_time(report.half_width))
    if not math.isfinite(horizon):
        horizon = 1.0
    for k in range(1, samples + 1):
        t = horizon * k / (samples + 1)
        total_s, total_c = diperna_totals(report.self_similar_fan, report.subsolution_fan,
                                          g, report.half_width, t)
        if not total_c > total_s:
            return False
    return True


def dimension_extension_rate(report: CounterexampleReport, extra_dims: int) -> Dict[str, Any]:
    """
    常数延拓到更高维

    单位截面的熵产生率不变，方框 [-L, L]^(2+k) 上的 D_L 多乘 (2L)^k。
    """
    if not isinstance(extra_dims, int) or extra_dims < 0:
        raise ValidationError("extra_dims must be a nonnegative integer")
    factor = (2.0 * report.half_width) ** (1 + extra_dims)
    result = {
        "extra_dims": extra_dims,
        "self_similar_rate": report.self_similar_rate,
        "fan_rate": report.fan_rate,
    }
    for key in ("self_similar_rate", "fan_rate"):
        value = getattr(report, key)
        result[key.replace("_rate", "_box_rate")] = None if value is None else factor * value
    return result
