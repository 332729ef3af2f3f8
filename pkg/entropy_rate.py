"""
分片常数波扇的熵产生率

对波扇 (sigma_k, 区域状态)，方框 [-L, L]^2 内总熵的右导数为
    D_L = 2L * sum_k sigma_k * ((rho s)_左 - (rho s)_右)
在所有波前仍在方框内时与时间无关。这里统一按单位宽度 D_L / 2L 存储。
"""
import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict, Optional, Tuple

from config import config
from exceptions import ValidationError, WavesLeftBox
from gas import GasConstants, GasState, entropy_density, entropy_flux
from riemann import SelfSimilarSolution, WaveKind, shock_entropy_production
from utils import logger

if TYPE_CHECKING:
    from fan_subsolution import FanSubsolution


@dataclass(frozen=True)
class PiecewiseFan:
    """x2/t 的分片常数函数：front_speeds 严格递增，region_states 多一个"""
    front_speeds: Tuple[float, ...]
    region_states: Tuple[GasState, ...]

    def __post_init__(self):
        if len(self.region_states) != len(self.front_speeds) + 1:
            raise ValidationError("a fan needs exactly one more region state than fronts")
        for speed in self.front_speeds:
            if not math.isfinite(speed):
                raise ValidationError("front speeds must be finite")
        for lower, upper in zip(self.front_speeds, self.front_speeds[1:]):
            if not lower < upper:
                raise ValidationError("front speeds must be strictly increasing")

    @property
    def max_speed(self) -> float:
        return max((abs(s) for s in self.front_speeds), default=0.0)

    def validity_time(self, half_width: float) -> float:
        """所有波前仍位于 [-L, L] 内的最大时间"""
        if self.max_speed == 0.0:
            return math.inf
        return half_width / self.max_speed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "front_speeds": list(self.front_speeds),
            "region_states": [s.to_dict() for s in self.region_states],
        }


@dataclass(frozen=True)
class EntropyRateReport:
    """熵产生率报告，rate_per_width 等于各波前贡献之和"""
    rate_per_width: float
    per_front_contributions: Tuple[float, ...]
    l_validity: float
    half_width: float

    @property
    def box_rate(self) -> float:
        """D_L 本身（含 2L 因子）"""
        return 2.0 * self.half_width * self.rate_per_width

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rate_per_width": self.rate_per_width,
            "per_front_contributions": list(self.per_front_contributions),
            "l_validity": self.l_validity,
            "half_width": self.half_width,
            "box_rate": self.box_rate,
        }


class Ordering(enum.Enum):
    """两个熵产生率的比较结果"""
    FIRST_GREATER = "first_greater"
    SECOND_GREATER = "second_greater"
    INCOMPARABLE = "incomparable"


def entropy_rate(fan: PiecewiseFan, g: GasConstants,
                 half_width: Optional[float] = None) -> EntropyRateReport:
    """闭式熵产生率（单位宽度）"""
    half_width = config.lab.box_half_width if half_width is None else half_width
    densities = [entropy_density(state, g) for state in fan.region_states]
    contributions = tuple(
        speed * (densities[k] - densities[k + 1])
        for k, speed in enumerate(fan.front_speeds)
    )
    return EntropyRateReport(
        rate_per_width=math.fsum(contributions),
        per_front_contributions=contributions,
        l_validity=fan.validity_time(half_width),
        half_width=half_width,
    )


def _check_inside_box(fan: PiecewiseFan, half_width: float, t: float):
    if fan.max_speed * t >= half_width:
        raise WavesLeftBox(
            f"a front reaches |x2| = {fan.max_speed * t:.6g} >= L = {half_width:.6g} at t = {t:.6g}"
        )


def box_entropy(fan: PiecewiseFan, g: GasConstants, half_width: float, t: float) -> float:
    """I(t) = ∫_{-L}^{L} rho s dx2，在分片常数剖面上精确积分"""
    if t < 0:
        raise ValidationError("time must be nonnegative")
    _check_inside_box(fan, half_width, t)
    edges = [-half_width] + [speed * t for speed in fan.front_speeds] + [half_width]
    return math.fsum(
        entropy_density(state, g) * (edges[j + 1] - edges[j])
        for j, state in enumerate(fan.region_states)
    )


def entropy_rate_oracle(fan: PiecewiseFan, g: GasConstants, half_width: float,
                        t1: float, t2: float) -> float:
    """
    (I(t2) - I(t1)) / (t2 - t1)，与闭式结果独立的数值校验

    Raises:
        ValidationError: 不满足 0 < t1 < t2
        WavesLeftBox: 波前在 t2 之前离开方框
    """
    if not 0 < t1 < t2:
        raise ValidationError("oracle window needs 0 < t1 < t2")
    before = box_entropy(fan, g, half_width, t1)
    after = box_entropy(fan, g, half_width, t2)
    return (after - before) / (t2 - t1)


def compare_rates(a: EntropyRateReport, b: EntropyRateReport) -> Ordering:
    """严格比较，不设容差；相等视为不可比"""
    if b.rate_per_width > a.rate_per_width:
        return Ordering.SECOND_GREATER
    if a.rate_per_width > b.rate_per_width:
        return Ordering.FIRST_GREATER
    return Ordering.INCOMPARABLE


def dafermos_dominates(a: EntropyRateReport, b: EntropyRateReport) -> bool:
    """a ≺ b：b 的熵产生率严格更大，a 因此不满足熵率准则"""
    return compare_rates(a, b) is Ordering.SECOND_GREATER


def diperna_totals(a: PiecewiseFan, b: PiecewiseFan, g: GasConstants,
                   half_width: float, t: float) -> Tuple[float, float]:
    """[-L, L]^2 内两个解在时刻 t 的总熵 (S_a, S_b)"""
    total_a = 2.0 * half_width * box_entropy(a, g, half_width, t)
    total_b = 2.0 * half_width * box_entropy(b, g, half_width, t)
    return total_a, total_b


# ==================== 波扇构造 ====================

def fan_from_solution(solution: SelfSimilarSolution) -> PiecewiseFan:
    """自相似解转为分片常数波扇，含稀疏波时报错"""
    if any(wave.kind is WaveKind.RAREFACTION for wave in solution.waves):
        raise ValidationError("solution contains a rarefaction and is not piecewise constant")
    return PiecewiseFan(
        front_speeds=tuple(wave.speed for wave in solution.waves),
        region_states=tuple(solution.states),
    )


def fan_from_subsolution(sub: "FanSubsolution") -> PiecewiseFan:
    """扇形子解的 (rho, p) 场：左状态、楔形区、右状态"""
    return PiecewiseFan(
        front_speeds=(sub.mu_minus, sub.mu_plus),
        region_states=(sub.data.left, sub.wedge_state(), sub.data.right),
    )


def self_similar_rate(solution: SelfSimilarSolution, g: GasConstants) -> float:
    """
    任意波系的单位宽度熵产生率

    光滑区 rho s 守恒，方框内熵的变化等于边界熵通量差加各间断处的熵产生。
    分片常数时与 entropy_rate(fan_from_solution(...)) 一致。
    """
    left, right = solution.states[0], solution.states[-1]
    terms = [entropy_flux(left, g), -entropy_flux(right, g)]
    terms.extend(shock_entropy_production(wave, g) for wave in solution.waves)
    rate = math.fsum(terms)
    logger.debug(f"自相似解熵产生率 {rate:.6f}")
    return rate

