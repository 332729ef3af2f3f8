"""
异常定义

SolverError 对应退出码 2，InputError 对应退出码 1
"""
from typing import Optional


class LabError(Exception):
    """实验室异常基类"""
    exit_code = 2

    def __init__(self, message: str = ""):
        super().__init__(message)
        self.message = message

    @property
    def code(self) -> str:
        """机器可读的错误名"""
        return type(self).__name__

    def to_dict(self):
        return {"error": self.code, "message": self.message}


# ==================== 求解错误 ====================

class SolverError(LabError):
    """数值求解失败"""
    exit_code = 2


class NoTwoShockRoot(SolverError):
    """求得的 p_M 未超过两侧压力，数据不在双激波区"""


class BracketingFailure(SolverError):
    """搜索区间内未找到变号"""


class DegenerateShock(SolverError):
    """激波两侧密度相同，速度无定义"""


class VacuumFormation(SolverError):
    """数据过于膨胀，中间压力不为正"""


class NewtonDivergence(SolverError):
    """所有初值下 Newton 迭代均未收敛"""


class InvalidIntermediate(SolverError):
    """求得的 p1 或 C1 非正"""


class UnsupportedTangentialVelocity(SolverError):
    """扇形子解只支持切向速度为零的数据"""


class WavesLeftBox(SolverError):
    """波前在给定时间之前离开 [-L, L]"""


class EpsilonOutOfRange(SolverError):
    """epsilon 不满足 0 < epsilon < delta"""


class InfeasibleLambda(SolverError):
    """Lambda 过小，动能出现非正值"""


# ==================== 输入错误 ====================

class InputError(LabError):
    """输入或参数错误"""
    exit_code = 1


class ValidationError(InputError):
    """参数校验失败"""


class ParseError(InputError):
    """输入文件解析失败（带行列号）"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.line = line
        self.column = column

    def to_dict(self):
        data = super().to_dict()
        data.update({"line": self.line, "column": self.column})
        return data
