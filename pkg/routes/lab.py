"""
实验 API 路由

请求体与 CLI 参数一一对应，返回与 CLI JSON 输出相同的报告结构，并附带 run_id。
"""
from typing import List, Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from config import REFERENCE_PRESET, config
from gas import GasConstants, GasState
from profile_construction import Cell, EntropyProfile, PartitionSpec
from riemann import RiemannData
from services.input_parser import parse_riemann_file
from services.pipelines import (
    run_counterexample,
    run_profile,
    run_rate,
    run_riemann,
    run_subsolution,
    run_sweep,
)
from services.run_recorder import record_run

router = APIRouter(prefix="/api/lab", tags=["Lab"])


class StateModel(BaseModel):
    rho: float
    v1: float = 0.0
    v2: float = 0.0
    p: float

    def to_state(self) -> GasState:
        return GasState(rho=self.rho, v1=self.v1, v2=self.v2, p=self.p)


class RiemannRequest(BaseModel):
    """left/right 缺省时使用内置数据"""
    left: Optional[StateModel] = None
    right: Optional[StateModel] = None
    c_v: float = Field(default_factory=lambda: config.lab.c_v)
    L: float = Field(default_factory=lambda: config.lab.box_half_width)

    def data(self) -> RiemannData:
        if self.left is None or self.right is None:
            return parse_riemann_file(REFERENCE_PRESET)
        return RiemannData(left=self.left.to_state(), right=self.right.to_state())


class SubsolutionRequest(RiemannRequest):
    rho1: float = Field(default_factory=lambda: config.lab.rho1)
    rho1_grid: List[float] = Field(default_factory=list)


class SweepRequest(RiemannRequest):
    rho1: float = Field(default_factory=lambda: config.lab.rho1)
    cv_grid: List[float] = Field(default_factory=lambda: [1.0, 1.25, 1.5])


class CellModel(BaseModel):
    volume: float
    rho0: float
    theta0: float


class ProfileRequest(BaseModel):
    cells: List[CellModel]
    delta: float
    T: float
    breakpoints: List[float] = Field(default_factory=list)
    values: List[float] = Field(default_factory=list)
    c_v: float = Field(default_factory=lambda: config.lab.c_v)
    epsilon: Optional[float] = None
    margin: Optional[float] = None
    Lambda: Optional[float] = None


def _recorded(command: str, pipeline, c_v=None, rho1=None):
    run_id, envelope = record_run(command, pipeline, source="api", c_v=c_v, rho1=rho1)
    return {"run_id": run_id, **envelope}


@router.post("/riemann")
def riemann(request: RiemannRequest):
    """求解 Riemann 问题"""
    return _recorded("riemann", lambda: run_riemann(request.data(), GasConstants(request.c_v)),
                     c_v=request.c_v)


@router.post("/rate")
def rate(request: RiemannRequest):
    """自相似解的熵产生率与数值校验"""
    return _recorded("rate", lambda: run_rate(request.data(), GasConstants(request.c_v), request.L),
                     c_v=request.c_v)


@router.post("/subsolution")
def subsolution(request: SubsolutionRequest):
    """求解扇形子解并检查容许性"""
    return _recorded(
        "subsolution",
        lambda: run_subsolution(request.data(), request.rho1, GasConstants(request.c_v),
                                request.rho1_grid, request.L),
        c_v=request.c_v, rho1=request.rho1,
    )


@router.post("/counterexample")
def counterexample(request: SubsolutionRequest):
    """完整反例复现"""
    return _recorded(
        "counterexample",
        lambda: run_counterexample(request.data(), request.rho1, GasConstants(request.c_v), request.L),
        c_v=request.c_v, rho1=request.rho1,
    )


@router.post("/sweep")
def sweep(request: SweepRequest):
    """c_v 扫描"""
    return _recorded(
        "sweep",
        lambda: run_sweep(request.data(), request.rho1, request.cv_grid, request.L),
        rho1=request.rho1,
    )


@router.post("/profile")
def profile(request: ProfileRequest):
    """给定熵剖面的构造检查"""

    def pipeline():
        partition = PartitionSpec(cells=tuple(
            Cell(volume=c.volume, rho0=c.rho0, theta0=c.theta0) for c in request.cells
        ))
        entropy_profile = EntropyProfile(delta=request.delta, T=request.T,
                                         breakpoints=tuple(request.breakpoints),
                                         values=tuple(request.values))
        return run_profile(partition, entropy_profile, GasConstants(request.c_v),
                           epsilon=request.epsilon, margin=request.margin, Lambda=request.Lambda)

    return _recorded("profile", pipeline, c_v=request.c_v)
