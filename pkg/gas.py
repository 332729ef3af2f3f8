"""
理想气体热力学基础

Boyle-Mariotte 定律: p = rho * theta, e = c_v * theta
熵: s = c_v log(theta) - log(rho)

所有量均为无量纲。存储压力而非温度，温度由 p / rho 导出。
"""
import math
from dataclasses import dataclass, replace
from typing import Any, Dict

from exceptions import ValidationError


@dataclass(frozen=True)
class GasConstants:
    """气体常数"""
    c_v: float = 1.5

    def __post_init__(self):
        if not (self.c_v > 0 and math.isfinite(self.c_v)):
            raise ValidationError(f"c_v must be positive, got {self.c_v}")

    @property
    def adiabatic_exponent(self) -> float:
        """gamma = 1 + 1/c_v"""
        return 1.0 + 1.0 / self.c_v


@dataclass(frozen=True)
class GasState:
    """常数流体状态：密度、二维速度 (v1 切向, v2 法向)、压力"""
    rho: float
    v1: float
    v2: float
    p: float

    def __post_init__(self):
        for name in ("rho", "v1", "v2", "p"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.rho <= 0:
            raise ValidationError(f"rho must be positive, got {self.rho}")
        if self.p <= 0:
            raise ValidationError(f"p must be positive, got {self.p}")

    @property
    def theta(self) -> float:
        return temperature(self)

    def mirrored(self) -> "GasState":
        """x2 -> -x2 反射"""
        return replace(self, v2=-self.v2)

    def to_dict(self) -> Dict[str, Any]:
        return {"rho": self.rho, "v1": self.v1, "v2": self.v2, "p": self.p}

    @classmethod
    def from_dict(cls, data: dict) -> "GasState":
        return cls(rho=float(data["rho"]), v1=float(data.get("v1", 0.0)),
                   v2=float(data.get("v2", 0.0)), p=float(data["p"]))


def temperature(state: GasState) -> float:
    """theta = p / rho"""
    return state.p / state.rho


def specific_entropy(state: GasState, g: GasConstants) -> float:
    """s = c_v log(p/rho) - log(rho) = log(p^c_v / rho^(c_v+1))"""
    return g.c_v * math.log(state.p / state.rho) - math.log(state.rho)


def specific_entropy_closed(state: GasState, g: GasConstants) -> float:
    """压力形式 c_v log p - (c_v+1) log rho，用于一致性检查"""
    return g.c_v * math.log(state.p) - (g.c_v + 1.0) * math.log(state.rho)


def entropy_density(state: GasState, g: GasConstants) -> float:
    """rho * s，总熵积分的被积函数"""
    return state.rho * specific_entropy(state, g)


def entropy_flux(state: GasState, g: GasConstants) -> float:
    """法向熵通量 rho * s * v2"""
    return entropy_density(state, g) * state.v2


def sound_speed(state: GasState, g: GasConstants) -> float:
    return math.sqrt(g.adiabatic_exponent * state.p / state.rho)


def total_energy(state: GasState, g: GasConstants) -> float:
    """E = 1/2 rho |v|^2 + c_v p"""
    return 0.5 * state.rho * (state.v1 ** 2 + state.v2 ** 2) + g.c_v * state.p


def conserved_fluxes(state: GasState, g: GasConstants):
    """
    法向 (x2) 守恒量与通量

    Returns:
        (densities, fluxes)，分别为 (rho, rho v1, rho v2, E) 及其 x2 方向通量
    """
    energy = total_energy(state, g)
    densities = (state.rho, state.rho * state.v1, state.rho * state.v2, energy)
    fluxes = (
        state.rho * state.v2,
        state.rho * state.v1 * state.v2,
        state.rho * state.v2 ** 2 + state.p,
        (energy + state.p) * state.v2,
    )
    return densities, fluxes
