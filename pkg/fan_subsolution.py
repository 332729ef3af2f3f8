"""
1-扇形子解

楔形区 mu_- t < x2 < mu_+ t 内状态为 (rho1, (alpha, beta), p1)，
动量通量松弛为 rho1 (U1 + C1/2 I) + p1 I，U1 = [[gamma, delta], [delta, -gamma]]，
能量密度取 rho1 C1 / 2 + c_v p1，能量通量 (rho1 C1 / 2 + (c_v + 1) p1) v。

未知量 (mu_-, mu_+, beta, p1, C1, gamma) 由两个波前上的质量、法向动量、
能量 Rankine-Hugoniot 条件确定，共六个方程。alpha = v1 = 0 时切向动量方程
给出 delta = 0。

求解顺序：消元初值（beta 的二次方程）-> 自相似解初值 -> 粗网格多初值，
每个初值都用阻尼 Newton（有限差分 Jacobian）修正到残差 1e-10。
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from config import config
from exceptions import (
    InvalidIntermediate,
    LabError,
    NewtonDivergence,
    UnsupportedTangentialVelocity,
    ValidationError,
)
from gas import GasConstants, GasState, conserved_fluxes, entropy_density, entropy_flux, specific_entropy
from riemann import RiemannData, solve_riemann
from utils import is_zero_jump, logger, scaled_residual

UNKNOWNS = ("mu_minus", "mu_plus", "beta", "p1", "C1", "gamma")
EQUATIONS = ("mass_minus", "momentum_minus", "energy_minus",
             "mass_plus", "momentum_plus", "energy_plus")


@dataclass(frozen=True)
class FanSubsolution:
    """扇形子解"""
    data: RiemannData
    rho1: float
    mu_minus: float
    mu_plus: float
    beta: float
    p1: float
    C1: float
    gamma: float
    alpha: float = 0.0
    delta: float = 0.0
    c_v: float = 1.5
    degenerate: bool = False
    seed: str = "elimination"
    residuals: Dict[str, float] = field(default_factory=dict, compare=False, hash=False)

    def wedge_state(self) -> GasState:
        """楔形区的 (rho, v, p)，熵产生率只用到 rho 与 p"""
        return GasState(rho=self.rho1, v1=self.alpha, v2=self.beta, p=self.p1)

    @property
    def unknowns(self) -> Tuple[float, ...]:
        return tuple(getattr(self, name) for name in UNKNOWNS)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        result = {name: getattr(self, name) for name in UNKNOWNS}
        result.update({
            "rho1": self.rho1,
            "alpha": self.alpha,
            "delta": self.delta,
            "c_v": self.c_v,
            "degenerate": self.degenerate,
            "seed": self.seed,
        })
        return result


@dataclass(frozen=True)
class InequalityCheck:
    """单个不等式的检查结果，margin 为左端减右端"""
    name: str
    margin: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "margin": self.margin, "passed": self.passed}


@dataclass(frozen=True)
class AdmissibilityDiagnostics:
    checks: Tuple[InequalityCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def by_name(self) -> Dict[str, InequalityCheck]:
        return {check.name: check for check in self.checks}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "all_passed": self.all_passed,
            "checks": [check.to_dict() for check in self.checks],
        }


@dataclass(frozen=True)
class Rho1ScanPoint:
    """rho1 扫描中的一个点，求解失败时 error 非空"""
    rho1: float
    subsolution: Optional[FanSubsolution] = None
    diagnostics: Optional[AdmissibilityDiagnostics] = None
    error: Optional[str] = None

    @property
    def admissible(self) -> bool:
        return self.diagnostics is not None and self.diagnostics.all_passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rho1": self.rho1,
            "subsolution": self.subsolution.to_dict() if self.subsolution else None,
            "diagnostics": self.diagnostics.to_dict() if self.diagnostics else None,
            "admissible": self.admissible,
            "error": self.error,
        }


# ==================== Rankine-Hugoniot 方程组 ====================

class _System:
    """固定数据与 rho1 的六方程残差"""

    def __init__(self, data: RiemannData, rho1: float, g: GasConstants):
        self.data = data
        self.rho1 = rho1
        self.g = g
        q_minus, f_minus = conserved_fluxes(data.left, g)
        q_plus, f_plus = conserved_fluxes(data.right, g)
        # (rho, rho v2, E) 及对应通量
        self.q_minus = (q_minus[0], q_minus[2], q_minus[3])
        self.f_minus = (f_minus[0], f_minus[2], f_minus[3])
        self.q_plus = (q_plus[0], q_plus[2], q_plus[3])
        self.f_plus = (f_plus[0], f_plus[2], f_plus[3])
        rho_max = max(data.left.rho, data.right.rho, rho1)
        v_max = max(abs(data.left.v2), abs(data.right.v2), 1.0)
        p_max = max(data.left.p, data.right.p)
        mass_scale = max(1.0, rho_max * v_max)
        momentum_scale = max(1.0, rho_max * v_max ** 2 + p_max)
        energy_scale = max(1.0, momentum_scale * v_max)
        self.scales = np.array([mass_scale, momentum_scale, energy_scale] * 2)

    def wedge(self, beta: float, p1: float, C1: float, gamma: float):
        """楔形区守恒量与法向通量"""
        rho1, c_v = self.rho1, self.g.c_v
        energy = 0.5 * rho1 * C1 + c_v * p1
        densities = (rho1, rho1 * beta, energy)
        fluxes = (rho1 * beta, rho1 * (0.5 * C1 - gamma) + p1, (energy + p1) * beta)
        return densities, fluxes

    def raw_terms(self, x: Sequence[float]):
        """每个方程的 (sigma q_L, sigma q_R, f_L, f_R)"""
        mu_minus, mu_plus, beta, p1, C1, gamma = x
        q_w, f_w = self.wedge(beta, p1, C1, gamma)
        terms = []
        for k in range(3):
            terms.append((mu_minus * self.q_minus[k], mu_minus * q_w[k], self.f_minus[k], f_w[k]))
        for k in range(3):
            terms.append((mu_plus * q_w[k], mu_plus * self.q_plus[k], f_w[k], self.f_plus[k]))
        return terms

    def residual(self, x: Sequence[float]) -> np.ndarray:
        """mu (q_L - q_R) - (f_L - f_R)，按数据量级缩放"""
        raw = [(a - b) - (c - d) for a, b, c, d in self.raw_terms(x)]
        return np.array(raw) / self.scales

    def scaled_residuals(self, x: Sequence[float]) -> Dict[str, float]:
        """按各项自身量级缩放的残差，用于报告"""
        return {
            name: scaled_residual((a - b) - (c - d), a, b, c, d)
            for name, (a, b, c, d) in zip(EQUATIONS, self.raw_terms(x))
        }


def _fd_jacobian(system: _System, x: np.ndarray, fx: np.ndarray) -> np.ndarray:
    """前向差分 Jacobian"""
    n = len(x)
    jac = np.empty((n, n))
    for j in range(n):
        h = config.solver.fd_step * max(1.0, abs(x[j]))
        shifted = x.copy()
        shifted[j] += h
        jac[:, j] = (system.residual(shifted) - fx) / h
    return jac


def damped_newton(system: _System, seed: Sequence[float]) -> np.ndarray:
    """
    阻尼 Newton：步长不降低残差时减半，最多 newton_max_halvings 次

    Raises:
        NewtonDivergence: 迭代次数用尽、减半用尽或 Jacobian 奇异
    """
    solver = config.solver
    x = np.asarray(seed, dtype=float)
    fx = system.residual(x)
    norm = float(np.max(np.abs(fx)))
    for iteration in range(solver.newton_max_iter):
        if norm <= solver.newton_tol:
            logger.debug(f"Newton 收敛：迭代 {iteration} 次，残差 {norm:.3e}")
            return x
        jac = _fd_jacobian(system, x, fx)
        try:
            step = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError:
            raise NewtonDivergence("singular Jacobian")
        damping = 1.0
        for _ in range(solver.newton_max_halvings + 1):
            trial = x + damping * step
            f_trial = system.residual(trial)
            trial_norm = float(np.max(np.abs(f_trial)))
            if math.isfinite(trial_norm) and trial_norm < norm:
                break
            damping *= 0.5
        else:
            raise NewtonDivergence(f"step halving exhausted at residual {norm:.3e}")
        x, fx, norm = trial, f_trial, trial_norm
    if norm <= solver.newton_tol:
        return x
    raise NewtonDivergence(f"no convergence in {solver.newton_max_iter} iterations")


# ==================== 初值 ====================

def elimination_seeds(data: RiemannData, rho1: float, g: GasConstants) -> List[np.ndarray]:
    """
    消元初值

    质量守恒给出 mu_± 关于 beta 的线性表达，两侧法向动量给出同一楔形区通量，
    相等即 beta 的二次方程；能量方程对 (E1, E1 + p1) 线性。
    """
    left, right = data.left, data.right
    d_minus = left.rho - rho1
    d_plus = rho1 - right.rho
    if is_zero_jump(left.rho, rho1) or is_zero_jump(rho1, right.rho):
        return []
    m_minus = left.rho * left.v2
    m_plus = right.rho * right.v2
    base = left.rho * left.v2 ** 2 + left.p - right.rho * right.v2 ** 2 - right.p
    a = -rho1 ** 2 * (1.0 / d_minus + 1.0 / d_plus)
    b = 2.0 * rho1 * (m_minus / d_minus + m_plus / d_plus)
    c = base - m_minus ** 2 / d_minus - m_plus ** 2 / d_plus
    roots = np.roots([a, b, c])

    system = _System(data, rho1, g)
    e_minus, e_plus = system.q_minus[2], system.q_plus[2]
    flux_minus, flux_plus = system.f_minus[2], system.f_plus[2]
    seeds = []
    for root in roots:
        if abs(root.imag) > 1e-9 * max(1.0, abs(root.real)):
            continue
        beta = float(root.real)
        if beta == 0.0:
            continue
        mu_minus = (m_minus - rho1 * beta) / d_minus
        mu_plus = (rho1 * beta - m_plus) / d_plus
        if not mu_minus < mu_plus:
            logger.debug(f"舍弃 beta = {beta:.6g}：mu_- >= mu_+")
            continue
        momentum_flux = left.rho * left.v2 ** 2 + left.p - mu_minus * (m_minus - rho1 * beta)
        energy = (flux_minus - flux_plus + mu_plus * e_plus - mu_minus * e_minus) / (mu_plus - mu_minus)
        enthalpy = (flux_plus + mu_plus * (energy - e_plus)) / beta
        p1 = enthalpy - energy
        C1 = 2.0 * (energy - g.c_v * p1) / rho1
        gamma = 0.5 * C1 - (momentum_flux - p1) / rho1
        seeds.append(np.array([mu_minus, mu_plus, beta, p1, C1, gamma]))
    return seeds


def self_similar_seed(data: RiemannData, rho1: float, g: GasConstants) -> Optional[np.ndarray]:
    """由一维自相似解构造初值：p1 取 p_M 与 p_- 的中点，mu_± 取激波速度"""
    try:
        solution = solve_riemann(data, g)
    except LabError as e:
        logger.warning(f"自相似初值不可用: {e.message}")
        return None
    if len(solution.waves) < 2:
        return None
    beta = solution.v_M2
    p1 = 0.5 * (solution.p_M + data.left.p)
    C1 = beta ** 2 + p1 / rho1
    gamma = -0.5 * beta ** 2
    return np.array([solution.waves[0].speed_lo, solution.waves[-1].speed_hi, beta, p1, C1, gamma])


def grid_seeds(base: np.ndarray) -> List[np.ndarray]:
    """围绕基准初值的粗网格"""
    seeds = []
    for p_factor in (0.5, 1.0, 2.0):
        for c_factor in (0.5, 1.0, 2.0):
            if p_factor == 1.0 and c_factor == 1.0:
                continue
            seed = base.copy()
            seed[3] *= p_factor
            seed[4] *= c_factor
            seeds.append(seed)
    return seeds


# ==================== 求解 ====================

def _validate_inputs(data: RiemannData, rho1: float):
    if not (math.isfinite(rho1) and rho1 > 0):
        raise ValidationError("rho1 must be positive")
    if data.left.v1 != 0.0 or data.right.v1 != 0.0:
        raise UnsupportedTangentialVelocity(
            "fan subsolution requires zero tangential velocity on both sides"
        )


def _degenerate_subsolution(data: RiemannData, rho1: float, g: GasConstants) -> FanSubsolution:
    """左右相同且 rho1 = rho：两个波前均无跳跃"""
    state = data.left
    C1 = state.v2 ** 2
    if C1 <= 0:
        raise InvalidIntermediate("degenerate subsolution has C1 = v2^2 = 0")
    x = (state.v2, state.v2, state.v2, state.p, C1, -0.5 * C1)
    system = _System(data, rho1, g)
    return FanSubsolution(
        data=data, rho1=rho1, mu_minus=x[0], mu_plus=x[1], beta=x[2], p1=x[3],
        C1=x[4], gamma=x[5], c_v=g.c_v, degenerate=True, seed="degenerate",
        residuals=system.scaled_residuals(x),
    )


def _solve_with_seeds(data: RiemannData, rho1: float, g: GasConstants,
                      seeds: Iterable[Tuple[str, np.ndarray]]) -> FanSubsolution:
    system = _System(data, rho1, g)
    invalid: Optional[np.ndarray] = None
    for label, seed in seeds:
        try:
            x = damped_newton(system, seed)
        except NewtonDivergence as e:
            logger.warning(f"初值 {label} 未收敛: {e.message}")
            continue
        mu_minus, mu_plus, beta, p1, C1, gamma = (float(v) for v in x)
        if not mu_minus < mu_plus:
            continue
        if p1 <= 0 or C1 <= 0:
            invalid = x
            continue
        return FanSubsolution(
            data=data, rho1=rho1, mu_minus=mu_minus, mu_plus=mu_plus, beta=beta,
            p1=p1, C1=C1, gamma=gamma, c_v=g.c_v, seed=label,
            residuals=system.scaled_residuals(x),
        )
    if invalid is not None:
        raise InvalidIntermediate(
            f"solved p1 = {invalid[3]:.6g}, C1 = {invalid[4]:.6g}; both must be positive"
        )
    raise NewtonDivergence(f"no seed converged for rho1 = {rho1}")


def _default_seeds(data: RiemannData, rho1: float, g: GasConstants):
    for seed in elimination_seeds(data, rho1, g):
        yield "elimination", seed
    base = self_similar_seed(data, rho1, g)
    if base is not None:
        yield "self_similar", base
        for seed in grid_seeds(base):
            yield "grid", seed


def solve_fan_subsolution(data: RiemannData, rho1: float, g: GasConstants) -> FanSubsolution:
    """
    求解给定 rho1 的扇形子解

    Raises:
        ValidationError: rho1 非正
        UnsupportedTangentialVelocity: 数据含切向速度
        NewtonDivergence: 所有初值均不收敛
        InvalidIntermediate: 解出的 p1 或 C1 非正
    """
    _validate_inputs(data, rho1)
    if data.is_constant() and is_zero_jump(rho1, data.left.rho):
        return _degenerate_subsolution(data, rho1, g)
    sub = _solve_with_seeds(data, rho1, g, _default_seeds(data, rho1, g))
    logger.debug(f"扇形子解 rho1 = {rho1}: mu = ({sub.mu_minus:.6g}, {sub.mu_plus:.6g}), "
                 f"p1 = {sub.p1:.6g}, 初值 {sub.seed}")
    return sub


def continue_fan_subsolution(data: RiemannData, rho1_path: Sequence[float],
                             g: GasConstants) -> List[FanSubsolution]:
    """沿 rho1 路径延拓：每一步以前一步的解为首个初值"""
    path: List[FanSubsolution] = []
    for rho1 in rho1_path:
        _validate_inputs(data, rho1)
        seeds = []
        if path:
            seeds.append(("continuation", np.array(path[-1].unknowns)))
        seeds.extend(_default_seeds(data, rho1, g))
        path.append(_solve_with_seeds(data, rho1, g, seeds))
    return path


# ==================== 容许性 ====================

def check_admissibility(sub: FanSubsolution, data: RiemannData,
                        g: GasConstants) -> AdmissibilityDiagnostics:
    """
    逐条检查子解不等式

    楔形区：v1⊗v1 - U1 < C1/2 I（严格），等价于迹与行列式两条；
    波前：熵产生 -mu [rho s] + [rho s v2] >= 0，[q] = 右 - 左。
    """
    alpha, beta, gamma, delta, C1 = sub.alpha, sub.beta, sub.gamma, sub.delta, sub.C1
    half = 0.5 * C1
    off_diagonal = alpha * beta - delta
    determinant = (half - alpha ** 2 + gamma) * (half - beta ** 2 - gamma) - off_diagonal ** 2
    trace = C1 - alpha ** 2 - beta ** 2

    wedge = sub.wedge_state()
    density_w, flux_w = entropy_density(wedge, g), entropy_flux(wedge, g)
    production_minus = (-sub.mu_minus * (density_w - entropy_density(data.left, g))
                        + (flux_w - entropy_flux(data.left, g)))
    production_plus = (-sub.mu_plus * (entropy_density(data.right, g) - density_w)
                       + (entropy_flux(data.right, g) - flux_w))

    checks = (
        InequalityCheck("front_order", sub.mu_plus - sub.mu_minus, sub.mu_plus > sub.mu_minus),
        InequalityCheck("positive_pressure", sub.p1, sub.p1 > 0),
        InequalityCheck("positive_energy_bound", C1, C1 > 0),
        InequalityCheck("subsolution_trace", trace, trace > 0),
        InequalityCheck("subsolution_determinant", determinant, determinant > 0),
        InequalityCheck("entropy_front_minus", production_minus, production_minus >= 0),
        InequalityCheck("entropy_front_plus", production_plus, production_plus >= 0),
    )
    return AdmissibilityDiagnostics(checks=checks)


def subsolution_entropy_states(sub: FanSubsolution, data: RiemannData,
                               g: GasConstants) -> Tuple[float, float, float]:
    """(s_-, s_1, s_+)，s_1 = log(p1^c_v / rho1^(c_v+1))"""
    return (
        specific_entropy(data.left, g),
        specific_entropy(sub.wedge_state(), g),
        specific_entropy(data.right, g),
    )


def _scan_point(data: RiemannData, rho1: float, g: GasConstants) -> Rho1ScanPoint:
    try:
        sub = solve_fan_subsolution(data, rho1, g)
    except LabError as e:
        logger.warning(f"rho1 = {rho1} 求解失败: {e.code}: {e.message}")
        return Rho1ScanPoint(rho1=rho1, error=f"{e.code}: {e.message}")
    return Rho1ScanPoint(rho1=rho1, subsolution=sub,
                         diagnostics=check_admissibility(sub, data, g))


def sweep_rho1(data: RiemannData, rho1_grid: Sequence[float],
               g: GasConstants) -> List[Rho1ScanPoint]:
    """按网格顺序返回每个 rho1 的求解与容许性结果，单点失败不影响其余"""
    grid = list(rho1_grid)
    if not grid:
        return []
    workers = max(1, min(config.lab.sweep_workers, len(grid)))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda rho1: _scan_point(data, rho1, g), grid))


def admissible_interval(points: Sequence[Rho1ScanPoint]) -> Optional[Tuple[float, float]]:
    """扫描结果中通过全部检查的 rho1 范围（最小、最大）"""
    passing = [point.rho1 for point in points if point.admissible]
    if not passing:
        return None
    return min(passing), max(passing)
