"""
给定总熵剖面的构造

初始密度、温度在各单元 Q_i 上为常数。给定剖面 S̃ 后：
- 密度保持 rho0_i，总质量 M0 = sum |Q_i| rho0_i 守恒
- 温度 theta_i(t) = exp(S̃(t)) theta0_i
- 熵 s_i(t) = c_v S̃(t) + c_v log theta0_i - log rho0_i
- 总能量密度取常数 Lambda，动能 e_kin = Lambda - c_v exp(S̃(t)) rho0_i theta0_i

单元只以体积表示：构造中只出现单元上常数场的积分。
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import config
from exceptions import EpsilonOutOfRange, InfeasibleLambda, ValidationError
from gas import GasConstants

RELATIVE_TOL = 1e-12


@dataclass(frozen=True)
class EntropyProfile:
    """
    右连续阶梯剖面

    breakpoints[k] <= t < breakpoints[k+1] 时取 values[k]，第一个断点之前为 0。
    """
    delta: float
    T: float
    breakpoints: Tuple[float, ...] = ()
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if not (math.isfinite(self.delta) and self.delta > 0):
            raise ValidationError("delta must be positive")
        if not (math.isfinite(self.T) and self.T > 0):
            raise ValidationError("T must be positive")
        if len(self.breakpoints) != len(self.values):
            raise ValidationError("breakpoints and values must have equal length")
        for t in self.breakpoints:
            if not (math.isfinite(t) and 0 <= t <= self.T):
                raise ValidationError(f"breakpoint {t} outside [0, T]")
        for earlier, later in zip(self.breakpoints, self.breakpoints[1:]):
            if not earlier < later:
                raise ValidationError("breakpoints must be strictly increasing")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "delta": self.delta,
            "T": self.T,
            "breakpoints": list(self.breakpoints),
            "values": list(self.values),
        }


@dataclass(frozen=True)
class Cell:
    volume: float
    rho0: float
    theta0: float


@dataclass(frozen=True)
class PartitionSpec:
    """单元划分：(体积, 初始密度, 初始温度)"""
    cells: Tuple[Cell, ...]

    def __post_init__(self):
        if not self.cells:
            raise ValidationError("partition needs at least one cell")
        for index, cell in enumerate(self.cells):
            for name in ("volume", "rho0", "theta0"):
                value = getattr(cell, name)
                if not (math.isfinite(value) and value > 0):
                    raise ValidationError(f"cell {index}: {name} must be positive")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "PartitionSpec":
        return cls(cells=tuple(Cell(*map(float, row)) for row in rows))

    @property
    def volumes(self) -> np.ndarray:
        return np.array([c.volume for c in self.cells])

    @property
    def rho0(self) -> np.ndarray:
        return np.array([c.rho0 for c in self.cells])

    @property
    def theta0(self) -> np.ndarray:
        return np.array([c.theta0 for c in self.cells])

    @property
    def theta_bounds(self) -> Tuple[float, float]:
        return float(self.theta0.min()), float(self.theta0.max())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cells": [{"volume": c.volume, "rho0": c.rho0, "theta0": c.theta0} for c in self.cells],
            "theta_bounds": list(self.theta_bounds),
        }


@dataclass(frozen=True)
class ConstructionState:
    """时刻 t 的单元场"""
    Lambda: float
    t: float
    theta: Tuple[float, ...]
    rho_s: Tuple[float, ...]
    e_kin: Tuple[float, ...]
    momentum: Tuple[float, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "Lambda": self.Lambda,
            "t": self.t,
            "theta": list(self.theta),
            "rho_s": list(self.rho_s),
            "e_kin": list(self.e_kin),
            "momentum": list(self.momentum),
        }


@dataclass
class ProfileValidation:
    valid: bool
    violations: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"valid": self.valid, "violations": list(self.violations)}


@dataclass
class EntropyBalanceDiagnostics:
    """总熵恒等式检查结果"""
    total_mass: float
    initial_entropy: float
    epsilon: float
    samples: List[Dict[str, float]] = field(default_factory=list)
    increments: List[Dict[str, float]] = field(default_factory=list)
    shifted_increments: List[Dict[str, float]] = field(default_factory=list)
    max_relative_error: float = 0.0

    @property
    def identity_holds(self) -> bool:
        return self.max_relative_error <= RELATIVE_TOL

    @property
    def nondecreasing(self) -> bool:
        totals = [s["total"] for s in self.samples]
        return all(a <= b for a, b in zip(totals, totals[1:]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "total_mass": self.total_mass,
            "initial_entropy": self.initial_entropy,
            "epsilon": self.epsilon,
            "samples": self.samples,
            "increments": self.increments,
            "shifted_increments": self.shifted_increments,
            "max_relative_error": self.max_relative_error,
            "identity_holds": self.identity_holds,
            "nondecreasing": self.nondecreasing,
        }


@dataclass
class EnergyDiagnostics:
    """总能量检查结果"""
    Lambda: float
    states: List[ConstructionState] = field(default_factory=list)
    max_identity_error: float = 0.0
    min_kinetic_energy: float = math.inf

    @property
    def identity_holds(self) -> bool:
        return self.max_identity_error <= RELATIVE_TOL * max(1.0, abs(self.Lambda))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "Lambda": self.Lambda,
            "max_identity_error": self.max_identity_error,
            "min_kinetic_energy": self.min_kinetic_energy,
            "identity_holds": self.identity_holds,
            "states": [s.to_dict() for s in self.states],
        }


# ==================== 剖面 ====================

def profile_value(profile: EntropyProfile, t: float) -> float:
    """右连续取值 S̃(t)"""
    index = int(np.searchsorted(profile.breakpoints, t, side="right")) - 1
    if index < 0:
        return 0.0
    return float(profile.values[index])


def terminal_value(profile: EntropyProfile) -> float:
    """S̃(T-)"""
    index = int(np.searchsorted(profile.breakpoints, profile.T, side="left")) - 1
    if index < 0:
        return 0.0
    return float(profile.values[index])


def validate_profile(profile: EntropyProfile) -> ProfileValidation:
    """检查剖面属于 S[delta]：起始段为零、单调不减、有界"""
    violations = []
    for t, value in zip(profile.breakpoints, profile.values):
        if t < profile.delta and value != 0.0:
            violations.append(f"onset: profile is {value} at t = {t} < delta = {profile.delta}")
            break
    previous = 0.0
    for t, value in zip(profile.breakpoints, profile.values):
        if value < previous:
            violations.append(f"nondecreasing: profile drops from {previous} to {value} at t = {t}")
            break
        previous = value
    if not all(math.isfinite(v) for v in profile.values):
        violations.append("bounded: profile takes a non-finite value")
    return ProfileValidation(valid=not violations, violations=violations)


def default_sample_times(profile: EntropyProfile, epsilon: float) -> List[float]:
    """取 0 以及 [0, T - epsilon] 内相邻断点之间的中点，避开断点本身"""
    horizon = profile.T - epsilon
    marks = sorted({0.0, horizon} | {t for t in profile.breakpoints if 0 < t < horizon}
                   | {t - epsilon for t in profile.breakpoints if 0 < t - epsilon < horizon})
    return [0.0] + [0.5 * (a + b) for a, b in zip(marks, marks[1:])]


def require_valid_profile(profile: EntropyProfile) -> ProfileValidation:
    result = validate_profile(profile)
    if not result.valid:
        raise ValidationError("invalid entropy profile: " + "; ".join(result.violations))
    return result


# ==================== 场 ====================

def total_mass(partition: PartitionSpec) -> float:
    return math.fsum(partition.volumes * partition.rho0)


def _base_entropy(partition: PartitionSpec, g: GasConstants) -> np.ndarray:
    """c_v log theta0 - log rho0"""
    return g.c_v * np.log(partition.theta0) - np.log(partition.rho0)


def initial_total_entropy(partition: PartitionSpec, g: GasConstants) -> float:
    """S0 = sum |Q_i| rho0_i (c_v log theta0_i - log rho0_i)"""
    return math.fsum(partition.volumes * partition.rho0 * _base_entropy(partition, g))


def temperature_field(partition: PartitionSpec, profile: EntropyProfile, t: float) -> np.ndarray:
    """theta_i(t) = exp(S̃(t)) theta0_i"""
    return math.exp(profile_value(profile, t)) * partition.theta0


def entropy_field(partition: PartitionSpec, profile: EntropyProfile,
                  g: GasConstants, t: float) -> np.ndarray:
    """各单元 rho0_i s_i(t)"""
    s = g.c_v * profile_value(profile, t) + _base_entropy(partition, g)
    return partition.rho0 * s


def total_entropy(partition: PartitionSpec, profile: EntropyProfile,
                  g: GasConstants, t: float) -> float:
    return math.fsum(partition.volumes * entropy_field(partition, profile, g, t))


def _internal_energy(partition: PartitionSpec, profile: EntropyProfile,
                     g: GasConstants, t: float) -> np.ndarray:
    return g.c_v * math.exp(profile_value(profile, t)) * partition.rho0 * partition.theta0


def minimal_lambda(partition: PartitionSpec, profile: EntropyProfile,
                   g: GasConstants, margin: Optional[float] = None) -> float:
    """Lambda = (1 + margin) c_v exp(S̃(T-)) max_i rho0_i theta0_i"""
    margin = config.lab.lambda_margin if margin is None else margin
    if not (math.isfinite(margin) and margin > 0):
        raise ValidationError("margin must be positive")
    peak = max(terminal_value(profile), max(profile.values, default=0.0), 0.0)
    return (1.0 + margin) * g.c_v * math.exp(peak) * float(np.max(partition.rho0 * partition.theta0))


def construct_state(partition: PartitionSpec, profile: EntropyProfile,
                    g: GasConstants, Lambda: float, t: float) -> ConstructionState:
    """时刻 t 的温度、熵、动能与动量大小 |m| = sqrt(2 rho0 e_kin)"""
    e_kin = Lambda - _internal_energy(partition, profile, g, t)
    momentum = np.sqrt(2.0 * partition.rho0 * np.clip(e_kin, 0.0, None))
    return ConstructionState(
        Lambda=Lambda,
        t=t,
        theta=tuple(temperature_field(partition, profile, t).tolist()),
        rho_s=tuple(entropy_field(partition, profile, g, t).tolist()),
        e_kin=tuple(e_kin.tolist()),
        momentum=tuple(momentum.tolist()),
    )


# ==================== 检查 ====================

def _relative_error(value: float, expected: float, *scales: float) -> float:
    scale = max([1.0, abs(expected)] + [abs(s) for s in scales])
    return abs(value - expected) / scale


def verify_entropy_balance(partition: PartitionSpec, profile: EntropyProfile,
                           g: GasConstants, epsilon: float,
                           sample_times: Sequence[float]) -> EntropyBalanceDiagnostics:
    """
    检查 S(t) = S0 + c_v S̃(t) M0 及相邻取样点之间的增量

    shifted_increments 对应平移剖面 S̃(t + epsilon) 的构造。

    Raises:
        EpsilonOutOfRange: 不满足 0 < epsilon < delta
    """
    if not (0 < epsilon < profile.delta):
        raise EpsilonOutOfRange(f"epsilon = {epsilon} must satisfy 0 < epsilon < delta = {profile.delta}")
    times = sorted(float(t) for t in sample_times)
    for t in times:
        if not 0 <= t <= profile.T - epsilon:
            raise ValidationError(f"sample time {t} outside [0, T - epsilon]")

    mass = total_mass(partition)
    initial = initial_total_entropy(partition, g)
    diagnostics = EntropyBalanceDiagnostics(total_mass=mass, initial_entropy=initial, epsilon=epsilon)
    for t in times:
        value = profile_value(profile, t)
        cell_terms = partition.volumes * entropy_field(partition, profile, g, t)
        total = math.fsum(cell_terms)
        expected = initial + g.c_v * value * mass
        shifted_total = total_entropy(partition, profile, g, t + epsilon)
        error = _relative_error(total, expected, initial, g.c_v * value * mass,
                                math.fsum(np.abs(cell_terms)))
        diagnostics.max_relative_error = max(diagnostics.max_relative_error, error)
        diagnostics.samples.append({
            "t": t,
            "profile": value,
            "total": total,
            "expected": expected,
            "shifted_total": shifted_total,
            "mass": mass,
            "relative_error": error,
        })

    for earlier, later in zip(diagnostics.samples, diagnostics.samples[1:]):
        expected = g.c_v * mass * (later["profile"] - earlier["profile"])
        increment = later["total"] - earlier["total"]
        diagnostics.increments.append({
            "t_start": earlier["t"], "t_end": later["t"],
            "increment": increment, "expected": expected,
        })
        shifted_expected = g.c_v * mass * (
            profile_value(profile, later["t"] + epsilon) - profile_value(profile, earlier["t"] + epsilon)
        )
        diagnostics.shifted_increments.append({
            "t_start": earlier["t"], "t_end": later["t"],
            "increment": later["shifted_total"] - earlier["shifted_total"],
            "expected": shifted_expected,
        })
    return diagnostics


def total_energy_check(partition: PartitionSpec, profile: EntropyProfile, g: GasConstants,
                       Lambda: float, sample_times: Sequence[float]) -> EnergyDiagnostics:
    """
    检查 e_kin + c_v exp(S̃) rho0 theta0 = Lambda 且 e_kin > 0

    Raises:
        InfeasibleLambda: 某单元某时刻动能非正
    """
    diagnostics = EnergyDiagnostics(Lambda=Lambda)
    for t in sorted(float(t) for t in sample_times):
        state = construct_state(partition, profile, g, Lambda, t)
        e_kin = np.array(state.e_kin)
        worst = int(np.argmin(e_kin))
        if e_kin[worst] <= 0:
            raise InfeasibleLambda(
                f"kinetic energy {e_kin[worst]:.6g} <= 0 in cell {worst} at t = {t}; "
                f"Lambda = {Lambda} is too small"
            )
        total = e_kin + _internal_energy(partition, profile, g, t)
        diagnostics.max_identity_error = max(diagnostics.max_identity_error,
                                             float(np.max(np.abs(total - Lambda))))
        diagnostics.min_kinetic_energy = min(diagnostics.min_kinetic_energy, float(e_kin[worst]))
        diagnostics.states.append(state)
    return diagnostics
