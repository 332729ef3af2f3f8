"""
一维 Riemann 问题精确解

数据在 x1 方向为常数，在 x2 = 0 处间断。解为 x2/t 的函数：
左声波（激波或稀疏波）、接触间断、右声波。

双激波区直接使用闭式公式：
- p_M 为方程 -sqrt(2c_v)[phi_-(p) + phi_+(p)] = v_{+,2} - v_{-,2} 的根，
  phi_K(p) = (p - p_K) / sqrt(rho_K (p_K + (2c_v+1) p))
- v_{M,2} = v_{-,2} - sqrt(2c_v) phi_-(p_M)
- rho_{M±} = rho_± (p_± + (2c_v+1) p_M) / (p_M + (2c_v+1) p_±)
- sigma_± 由质量守恒的 Rankine-Hugoniot 条件给出

其它区域使用 gamma = 1 + 1/c_v 的标准理想气体压力函数。
"""
import enum
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from scipy.optimize import bisect, newton

from config import config
from exceptions import (
    BracketingFailure,
    DegenerateShock,
    NoTwoShockRoot,
    VacuumFormation,
)
from gas import (
    GasConstants,
    GasState,
    conserved_fluxes,
    entropy_density,
    entropy_flux,
    sound_speed,
)
from utils import is_zero_jump, logger, scaled_residual


class WaveKind(enum.Enum):
    """波的类型"""
    SHOCK = "shock"
    RAREFACTION = "rarefaction"
    CONTACT = "contact"


@dataclass(frozen=True)
class RiemannData:
    """Riemann 初值：left 位于 x2 < 0，right 位于 x2 > 0"""
    left: GasState
    right: GasState

    def mirrored(self) -> "RiemannData":
        """(L, R) -> (R̄, L̄)，v2 取反"""
        return RiemannData(left=self.right.mirrored(), right=self.left.mirrored())

    def is_constant(self) -> bool:
        return all(
            is_zero_jump(getattr(self.left, name), getattr(self.right, name))
            for name in ("rho", "v1", "v2", "p")
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "RiemannData":
        return cls(left=GasState.from_dict(data["left"]), right=GasState.from_dict(data["right"]))


@dataclass(frozen=True)
class Wave:
    """
    单个波

    pre_state 为 x2/t 较小一侧的状态，post_state 为较大一侧。
    family: -1 左声波，0 接触间断，+1 右声波
    """
    kind: WaveKind
    speed_lo: float
    speed_hi: float
    pre_state: GasState
    post_state: GasState
    family: int = 0

    @property
    def speed(self) -> float:
        return self.speed_lo

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "family": self.family,
            "speed_lo": self.speed_lo,
            "speed_hi": self.speed_hi,
            "pre_state": self.pre_state.to_dict(),
            "post_state": self.post_state.to_dict(),
        }


@dataclass(frozen=True)
class WavePattern:
    """波系分类结果，左右声波为 None 表示该侧无波"""
    left: Optional[WaveKind]
    contact: bool
    right: Optional[WaveKind]

    @property
    def kinds(self) -> List[WaveKind]:
        kinds = []
        if self.left is not None:
            kinds.append(self.left)
        if self.contact:
            kinds.append(WaveKind.CONTACT)
        if self.right is not None:
            kinds.append(self.right)
        return kinds

    @property
    def label(self) -> str:
        kinds = self.kinds
        if not kinds:
            return "none"
        return "-".join(k.value[0].upper() for k in kinds)

    @property
    def is_two_shock(self) -> bool:
        return self.left is WaveKind.SHOCK and self.right is WaveKind.SHOCK


@dataclass(frozen=True)
class SelfSimilarSolution:
    """自相似波扇：waves 按速度非减排列，states 比 waves 多一个"""
    waves: Tuple[Wave, ...]
    states: Tuple[GasState, ...]
    p_M: float
    v_M2: float
    c_v: float = 1.5
    closed_form: bool = False

    @property
    def pattern(self) -> WavePattern:
        left = right = None
        contact = False
        for wave in self.waves:
            if wave.family < 0:
                left = wave.kind
            elif wave.family > 0:
                right = wave.kind
            else:
                contact = True
        return WavePattern(left=left, contact=contact, right=right)

    def sample(self, t: float, x2: float) -> GasState:
        """在 (t, x2) 处取值，仅依赖 x2/t"""
        if t <= 0:
            return self.states[0] if x2 < 0 else self.states[-1]
        xi = x2 / t
        for i, wave in enumerate(self.waves):
            if xi < wave.speed_lo:
                return self.states[i]
            if wave.kind is WaveKind.RAREFACTION and xi <= wave.speed_hi:
                return rarefaction_state(wave, xi, GasConstants(self.c_v))
        return self.states[-1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "pattern": self.pattern.label,
            "p_M": self.p_M,
            "v_M2": self.v_M2,
            "closed_form": self.closed_form,
            "waves": [w.to_dict() for w in self.waves],
            "states": [s.to_dict() for s in self.states],
        }


# ==================== 双激波闭式公式 ====================

def _phi(p: float, state: GasState, g: GasConstants) -> float:
    return (p - state.p) / math.sqrt(state.rho * (state.p + (2.0 * g.c_v + 1.0) * p))


def _dphi(p: float, state: GasState, g: GasConstants) -> float:
    a = 2.0 * g.c_v + 1.0
    base = state.rho * (state.p + a * p)
    return 1.0 / math.sqrt(base) - 0.5 * (p - state.p) * a * state.rho / base ** 1.5


def two_shock_residual(data: RiemannData, p: float, g: GasConstants) -> float:
    """p_M 定义方程的残差（左端减右端），在双激波区随 p 单调递减"""
    lhs = -math.sqrt(2.0 * g.c_v) * (_phi(p, data.left, g) + _phi(p, data.right, g))
    return lhs - (data.right.v2 - data.left.v2)


def _two_shock_derivative(data: RiemannData, p: float, g: GasConstants) -> float:
    return -math.sqrt(2.0 * g.c_v) * (_dphi(p, data.left, g) + _dphi(p, data.right, g))


def _bracket_upper(func, lower: float, scale: float) -> float:
    """从 lower 几何扩张上界直到 func 变号"""
    solver = config.solver
    upper = max(lower, scale) * solver.bracket_growth
    for _ in range(solver.bracket_max_expansions):
        if func(upper) * func(lower) < 0:
            return upper
        upper *= solver.bracket_growth
    raise BracketingFailure(f"no sign change on [{lower}, {upper}]")


def _bisect_then_polish(func, fprime, lower: float, upper: float) -> float:
    """二分到 1e-12，再做 Newton 修正；修正结果变差时保留二分结果"""
    root = bisect(func, lower, upper, xtol=config.solver.bisection_xtol, maxiter=500)
    try:
        polished = newton(func, root, fprime=fprime, tol=1e-15, maxiter=8)
    except (RuntimeError, ZeroDivisionError, OverflowError):
        return root
    if lower <= polished <= upper and abs(func(polished)) <= abs(func(root)):
        return polished
    return root


def solve_intermediate_pressure(data: RiemannData, g: GasConstants) -> float:
    """
    求解双激波区中间压力 p_M

    Raises:
        NoTwoShockRoot: 根不超过 max(p_-, p_+)
        BracketingFailure: 未找到变号
    """
    p_max = max(data.left.p, data.right.p)
    def func(p):
        return two_shock_residual(data, p, g)

    def fprime(p):
        return _two_shock_derivative(data, p, g)

    at_max = func(p_max)
    if is_zero_jump(at_max, 0.0):
        # 零跳跃（含左右相同）：p_M 等于较大端压力
        return p_max
    if at_max < 0:
        raise NoTwoShockRoot(
            f"root of the two-shock equation does not exceed max(p_-, p_+) = {p_max}"
        )
    upper = _bracket_upper(func, p_max, p_max)
    p_M = _bisect_then_polish(func, fprime, p_max, upper)
    if p_M <= p_max:
        raise NoTwoShockRoot(f"p_M = {p_M} does not exceed max(p_-, p_+) = {p_max}")
    logger.debug(f"p_M = {p_M!r}, 残差 = {func(p_M):.3e}")
    return p_M


def intermediate_states(data: RiemannData, p_M: float, g: GasConstants) -> Tuple[float, float, float]:
    """返回 (v_M2, rho_M-, rho_M+)"""
    a = 2.0 * g.c_v + 1.0
    left, right = data.left, data.right
    v_M2 = left.v2 - math.sqrt(2.0 * g.c_v) * _phi(p_M, left, g)
    rho_minus = left.rho * (left.p + a * p_M) / (p_M + a * left.p)
    rho_plus = right.rho * (right.p + a * p_M) / (p_M + a * right.p)
    return v_M2, rho_minus, rho_plus


def shock_speeds(data: RiemannData, p_M: float,
                 intermediates: Tuple[float, float, float],
                 g: GasConstants) -> Tuple[float, float, float]:
    """
    返回 (sigma_-, sigma_+, sigma_M)

    sigma_±(rho_± - rho_M±) = rho_± v_±2 - rho_M± v_M2；sigma_M = v_M2
    """
    v_M2, rho_minus, rho_plus = intermediates
    left, right = data.left, data.right
    if is_zero_jump(left.rho, rho_minus) or is_zero_jump(right.rho, rho_plus):
        raise DegenerateShock("density does not jump across a shock front")
    sigma_minus = (left.rho * left.v2 - rho_minus * v_M2) / (left.rho - rho_minus)
    sigma_plus = (right.rho * right.v2 - rho_plus * v_M2) / (right.rho - rho_plus)
    return sigma_minus, sigma_plus, v_M2


# ==================== 通用压力函数 ====================

def _pressure_function(p: float, state: GasState, g: GasConstants) -> Tuple[float, float]:
    """标准 f_K(p) 及其导数：p > p_K 为激波支，否则为稀疏波支"""
    gamma = g.adiabatic_exponent
    if p > state.p:
        a_k = 2.0 / ((gamma + 1.0) * state.rho)
        b_k = (gamma - 1.0) / (gamma + 1.0) * state.p
        root = math.sqrt(a_k / (p + b_k))
        value = (p - state.p) * root
        deriv = root * (1.0 - 0.5 * (p - state.p) / (p + b_k))
        return value, deriv
    c_k = sound_speed(state, g)
    exponent = (gamma - 1.0) / (2.0 * gamma)
    ratio = p / state.p
    value = 2.0 * c_k / (gamma - 1.0) * (ratio ** exponent - 1.0)
    deriv = c_k / (gamma * state.p) * ratio ** (-(gamma + 1.0) / (2.0 * gamma))
    return value, deriv


def star_pressure(data: RiemannData, g: GasConstants) -> Tuple[float, float]:
    """
    通用区域的中间压力与法向速度 (p*, u*)

    Raises:
        VacuumFormation: p* 不超过真空阈值
    """
    left, right = data.left, data.right
    jump = right.v2 - left.v2

    def func(p):
        return _pressure_function(p, left, g)[0] + _pressure_function(p, right, g)[0] + jump

    def fprime(p):
        return _pressure_function(p, left, g)[1] + _pressure_function(p, right, g)[1]

    p_floor = config.solver.vacuum_threshold
    if func(p_floor) >= 0:
        raise VacuumFormation("initial data too expansive for a positive-pressure solution")
    p_max = max(left.p, right.p)
    if func(p_max) >= 0:
        upper = p_max
    else:
        upper = _bracket_upper(func, p_max, p_max)
    p_star = _bisect_then_polish(func, fprime, p_floor, upper)
    if p_star <= p_floor:
        raise VacuumFormation(f"intermediate pressure {p_star} below vacuum threshold")
    f_left = _pressure_function(p_star, left, g)[0]
    f_right = _pressure_function(p_star, right, g)[0]
    u_star = 0.5 * (left.v2 + right.v2) + 0.5 * (f_right - f_left)
    return p_star, u_star


def rarefaction_state(wave: Wave, xi: float, g: GasConstants) -> GasState:
    """稀疏波扇内 x2/t = xi 处的状态"""
    gamma = g.adiabatic_exponent
    gp1, gm1 = gamma + 1.0, gamma - 1.0
    if wave.family < 0:
        outer = wave.pre_state
        c_k = sound_speed(outer, g)
        u = 2.0 / gp1 * (c_k + 0.5 * gm1 * outer.v2 + xi)
        base = 2.0 / gp1 + gm1 / (gp1 * c_k) * (outer.v2 - xi)
    else:
        outer = wave.post_state
        c_k = sound_speed(outer, g)
        u = 2.0 / gp1 * (-c_k + 0.5 * gm1 * outer.v2 + xi)
        base = 2.0 / gp1 - gm1 / (gp1 * c_k) * (outer.v2 - xi)
    rho = outer.rho * base ** (2.0 / gm1)
    p = outer.p * base ** (2.0 * gamma / gm1)
    return GasState(rho=rho, v1=outer.v1, v2=u, p=p)


def _acoustic_wave(outer: GasState, p_star: float, u_star: float,
                   g: GasConstants, family: int) -> Tuple[Optional[Wave], GasState]:
    """构造一侧声波及其内侧中间状态"""
    gamma = g.adiabatic_exponent
    if is_zero_jump(p_star, outer.p):
        star = GasState(rho=outer.rho, v1=outer.v1, v2=u_star, p=outer.p)
        return None, star
    if p_star > outer.p:
        ratio = p_star / outer.p
        k = (gamma - 1.0) / (gamma + 1.0)
        rho_star = outer.rho * (ratio + k) / (k * ratio + 1.0)
        star = GasState(rho=rho_star, v1=outer.v1, v2=u_star, p=p_star)
        speed = (outer.rho * outer.v2 - rho_star * u_star) / (outer.rho - rho_star)
        kind, lo, hi = WaveKind.SHOCK, speed, speed
    else:
        rho_star = outer.rho * (p_star / outer.p) ** (1.0 / gamma)
        star = GasState(rho=rho_star, v1=outer.v1, v2=u_star, p=p_star)
        c_outer, c_star = sound_speed(outer, g), sound_speed(star, g)
        if family < 0:
            lo, hi = outer.v2 - c_outer, u_star - c_star
        else:
            lo, hi = u_star + c_star, outer.v2 + c_outer
        kind = WaveKind.RAREFACTION
    if family < 0:
        wave = Wave(kind, lo, hi, pre_state=outer, post_state=star, family=-1)
    else:
        wave = Wave(kind, lo, hi, pre_state=star, post_state=outer, family=1)
    return wave, star


def _assemble(left_wave: Optional[Wave], star_left: GasState,
              star_right: GasState, right_wave: Optional[Wave],
              data: RiemannData, p_M: float, v_M2: float,
              g: GasConstants, closed_form: bool) -> SelfSimilarSolution:
    waves: List[Wave] = []
    states: List[GasState] = [data.left]
    if left_wave is not None:
        waves.append(left_wave)
        states.append(star_left)
    has_contact = not (is_zero_jump(star_left.rho, star_right.rho)
                       and is_zero_jump(star_left.v1, star_right.v1))
    if has_contact:
        waves.append(Wave(WaveKind.CONTACT, v_M2, v_M2,
                          pre_state=star_left, post_state=star_right, family=0))
        states.append(star_right)
    if right_wave is not None:
        waves.append(right_wave)
        states.append(data.right)
    # 左右声波缺失时端点状态即中间状态
    states[0] = data.left
    states[-1] = data.right
    return SelfSimilarSolution(
        waves=tuple(waves), states=tuple(states), p_M=p_M, v_M2=v_M2,
        c_v=g.c_v, closed_form=closed_form,
    )


def _is_two_shock(data: RiemannData, g: GasConstants) -> bool:
    p_max = max(data.left.p, data.right.p)
    residual = two_shock_residual(data, p_max, g)
    return residual > 0 and not is_zero_jump(residual, 0.0)


def _solve_two_shock(data: RiemannData, g: GasConstants) -> SelfSimilarSolution:
    """双激波区：使用闭式公式"""
    p_M = solve_intermediate_pressure(data, g)
    intermediates = intermediate_states(data, p_M, g)
    v_M2, rho_minus, rho_plus = intermediates
    sigma_minus, sigma_plus, sigma_M = shock_speeds(data, p_M, intermediates, g)
    star_left = GasState(rho=rho_minus, v1=data.left.v1, v2=v_M2, p=p_M)
    star_right = GasState(rho=rho_plus, v1=data.right.v1, v2=v_M2, p=p_M)
    left_wave = Wave(WaveKind.SHOCK, sigma_minus, sigma_minus,
                     pre_state=data.left, post_state=star_left, family=-1)
    right_wave = Wave(WaveKind.SHOCK, sigma_plus, sigma_plus,
                      pre_state=star_right, post_state=data.right, family=1)
    return _assemble(left_wave, star_left, star_right, right_wave,
                     data, p_M, sigma_M, g, closed_form=True)


def solve_riemann(data: RiemannData, g: GasConstants) -> SelfSimilarSolution:
    """
    求解 Riemann 问题

    双激波区走闭式公式，其余波系使用通用压力函数。

    Raises:
        VacuumFormation: 无正压解
    """
    if data.is_constant():
        return SelfSimilarSolution(
            waves=(), states=(data.left,), p_M=data.left.p, v_M2=data.left.v2,
            c_v=g.c_v, closed_form=False,
        )
    if _is_two_shock(data, g):
        solution = _solve_two_shock(data, g)
    else:
        p_star, u_star = star_pressure(data, g)
        left_wave, star_left = _acoustic_wave(data.left, p_star, u_star, g, -1)
        right_wave, star_right = _acoustic_wave(data.right, p_star, u_star, g, 1)
        solution = _assemble(left_wave, star_left, star_right, right_wave,
                             data, p_star, u_star, g, closed_form=False)
    logger.debug(f"Riemann 波系 {solution.pattern.label}, p_M = {solution.p_M:.6g}")
    return solution


def classify_wave_pattern(data: RiemannData, g: GasConstants) -> WavePattern:
    """波系分类：每侧激波/稀疏波/无，接触间断是否存在"""
    return solve_riemann(data, g).pattern


# ==================== 波前检查 ====================

def rankine_hugoniot_residuals(wave: Wave, g: GasConstants) -> Dict[str, float]:
    """
    间断波前的缩放 Rankine-Hugoniot 残差 sigma(q_L - q_R) - (f_L - f_R)

    稀疏波返回空字典。
    """
    if wave.kind is WaveKind.RAREFACTION:
        return {}
    q_left, f_left = conserved_fluxes(wave.pre_state, g)
    q_right, f_right = conserved_fluxes(wave.post_state, g)
    sigma = wave.speed
    residuals = {}
    for name, ql, qr, fl, fr in zip(("mass", "momentum_1", "momentum_2", "energy"),
                                    q_left, q_right, f_left, f_right):
        raw = sigma * (ql - qr) - (fl - fr)
        residuals[name] = scaled_residual(raw, sigma * ql, sigma * qr, fl, fr)
    return residuals


def shock_entropy_production(wave: Wave, g: GasConstants) -> float:
    """波前处熵产生 sigma[[rho s]] - [[rho s v2]]，[[q]] = q_pre - q_post"""
    if wave.kind is WaveKind.RAREFACTION:
        return 0.0
    jump_density = entropy_density(wave.pre_state, g) - entropy_density(wave.post_state, g)
    jump_flux = entropy_flux(wave.pre_state, g) - entropy_flux(wave.post_state, g)
    return wave.speed * jump_density - jump_flux


def max_rh_residual(solution: SelfSimilarSolution, g: GasConstants) -> float:
    """所有间断波前的最大缩放残差"""
    worst = 0.0
    for wave in solution.waves:
        for value in rankine_hugoniot_residuals(wave, g).values():
            worst = max(worst, value)
    return worst
