"""
工具函数模块
"""
import logging
import math
from typing import List

from config import config

# 配置日志 - 仅配置本模块logger，避免影响其他模块
logger = logging.getLogger("entropy-lab")
if not logger.handlers:
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
    logger.addHandler(handler)
    logger.setLevel(getattr(logging, config.server.log_level.upper(), logging.INFO))


def set_log_level(level: str):
    """运行时调整日志级别（CLI --log-level）"""
    logger.setLevel(getattr(logging, level.upper(), logging.INFO))


def is_zero_jump(a: float, b: float, tol: float = None) -> bool:
    """相对跳跃小于阈值时视为无跳跃"""
    tol = config.solver.zero_jump_tol if tol is None else tol
    scale = max(abs(a), abs(b), 1.0)
    return abs(a - b) <= tol * scale


def scaled_residual(residual: float, *scales: float) -> float:
    """按 max(1, |scale|...) 缩放残差"""
    scale = max([1.0] + [abs(s) for s in scales])
    return abs(residual) / scale


def format_significant(value, digits: int = 6) -> str:
    """文本模式下按有效数字输出"""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            return str(value)
        return f"{value:.{digits}g}"
    return str(value)


def parse_float_list(text: str) -> List[float]:
    """解析逗号分隔的数值列表，如 "1,1.25,1.5" """
    if text is None or not text.strip():
        return []
    return [float(item) for item in text.split(',') if item.strip()]

