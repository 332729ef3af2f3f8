"""
配置管理模块
支持通过环境变量覆盖默认配置
"""
import os
from dataclasses import dataclass, field


@dataclass
class SolverConfig:
    """求根与非线性求解配置"""
    # 二分法收敛阈值（p_M）
    bisection_xtol: float = field(default_factory=lambda: float(os.getenv("LAB_BISECTION_XTOL", "1e-12")))
    # 上界几何扩张倍数与最大扩张次数
    bracket_growth: float = field(default_factory=lambda: float(os.getenv("LAB_BRACKET_GROWTH", "2.0")))
    bracket_max_expansions: int = field(default_factory=lambda: int(os.getenv("LAB_BRACKET_MAX_EXPANSIONS", "200")))
    # 阻尼Newton
    newton_tol: float = field(default_factory=lambda: float(os.getenv("LAB_NEWTON_TOL", "1e-10")))
    newton_max_iter: int = field(default_factory=lambda: int(os.getenv("LAB_NEWTON_MAX_ITER", "100")))
    newton_max_halvings: int = field(default_factory=lambda: int(os.getenv("LAB_NEWTON_MAX_HALVINGS", "30")))
    fd_step: float = field(default_factory=lambda: float(os.getenv("LAB_FD_STEP", "1e-7")))
    # 真空判定阈值、零跳跃判定阈值
    vacuum_threshold: float = 1e-14
    zero_jump_tol: float = 1e-12


@dataclass
class LabConfig:
    """实验默认参数"""
    c_v: float = field(default_factory=lambda: float(os.getenv("LAB_CV", "1.5")))
    rho1: float = field(default_factory=lambda: float(os.getenv("LAB_RHO1", "14")))
    box_half_width: float = field(default_factory=lambda: float(os.getenv("LAB_BOX_L", "1e4")))
    lambda_margin: float = field(default_factory=lambda: float(os.getenv("LAB_LAMBDA_MARGIN", "0.05")))
    epsilon: float = field(default_factory=lambda: float(os.getenv("LAB_EPSILON", "0.01")))
    sweep_workers: int = field(default_factory=lambda: int(os.getenv("LAB_SWEEP_WORKERS", "4")))


@dataclass
class ServerConfig:
    """服务器配置"""
    host: str = field(default_factory=lambda: os.getenv("LAB_SERVER_HOST", "0.0.0.0"))
    port: int = field(default_factory=lambda: int(os.getenv("LAB_SERVER_PORT", "5000")))
    log_level: str = field(default_factory=lambda: os.getenv("LAB_LOG_LEVEL", "INFO"))
    # 运行记录数据库目录
    data_dir: str = field(default_factory=lambda: os.getenv(
        "LAB_DATA_DIR",
        os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
    ))


@dataclass
class AppConfig:
    """应用总配置"""
    solver: SolverConfig = field(default_factory=SolverConfig)
    lab: LabConfig = field(default_factory=LabConfig)
    server: ServerConfig = field(default_factory=ServerConfig)
    version: str = "1.0.0"


# 全局配置实例
config = AppConfig()

# 随包分发的输入文件目录
PRESET_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'presets')
REFERENCE_PRESET = os.path.join(PRESET_DIR, 'reference_riemann.txt')
