"""
命令行入口

用法示例：
    python cli.py counterexample --preset paper
    python cli.py sweep --cv-grid 1,1.25,1.5 --format csv
    python cli.py profile --partition presets/example_partition.txt --profile presets/example_profile.txt

退出码：0 成功，1 输入/解析错误，2 求解错误。
"""
import argparse
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from config import REFERENCE_PRESET, config
from exceptions import InputError, LabError, ValidationError
from gas import GasConstants
from riemann import RiemannData
from services.input_parser import parse_partition_file, parse_profile_file, parse_riemann_file
from services.pipelines import (
    run_counterexample,
    run_profile,
    run_rate,
    run_riemann,
    run_subsolution,
    run_sweep,
)
from services.report_exporter import report_exporter
from utils import logger, parse_float_list, set_log_level

COMMANDS = ("riemann", "rate", "subsolution", "counterexample", "sweep", "profile")
PRESETS = {"paper": REFERENCE_PRESET}


class LabArgumentParser(argparse.ArgumentParser):
    """参数错误按输入错误处理（退出码 1）"""

    def error(self, message):
        raise InputError(message)


@dataclass
class RunConfig:
    """一次 CLI 运行的已校验参数"""
    command: str
    c_v: float
    rho1: float
    half_width: float
    fmt: str = "json"
    out: Optional[str] = None
    data_path: Optional[str] = None
    partition_path: Optional[str] = None
    profile_path: Optional[str] = None
    margin: Optional[float] = None
    epsilon: Optional[float] = None
    Lambda: Optional[float] = None
    cv_grid: List[float] = field(default_factory=list)
    rho1_grid: List[float] = field(default_factory=list)
    record: bool = False

    def validate(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command}")
        if not self.c_v > 0:
            raise ValidationError("c_v must be positive")
        if not self.rho1 > 0:
            raise ValidationError("rho1 must be positive")
        if not self.half_width > 0:
            raise ValidationError("L must be positive")
        if self.margin is not None and not self.margin > 0:
            raise ValidationError("margin must be positive")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValidationError("epsilon must be positive")
        if any(not value > 0 for value in self.rho1_grid):
            raise ValidationError("rho1 must be positive")
        if self.command == "sweep" and any(not value > 0 for value in self.cv_grid):
            raise ValidationError("c_v grid values must be positive")
        if self.command == "profile" and not (self.partition_path and self.profile_path):
            raise ValidationError("profile needs --partition and --profile")


def build_parser() -> LabArgumentParser:
    parser = LabArgumentParser(prog="entropy-lab", description="熵率准则反例实验工具")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--preset", choices=sorted(PRESETS), help="内置 Riemann 数据")
    parser.add_argument("--data", help="Riemann 数据文件（两行 rho v1 v2 p）")
    parser.add_argument("--cv", type=float, default=config.lab.c_v)
    parser.add_argument("--rho1", type=float, default=config.lab.rho1)
    parser.add_argument("--L", dest="half_width", type=float, default=config.lab.box_half_width)
    parser.add_argument("--cv-grid", default="1,1.25,1.5", help="sweep 的 c_v 列表，逗号分隔")
    parser.add_argument("--rho1-grid", default="", help="subsolution 附带的 rho1 扫描列表")
    parser.add_argument("--margin", type=float)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--lambda", dest="Lambda", type=float, help="指定总能量常数")
    parser.add_argument("--partition")
    parser.add_argument("--profile")
    parser.add_argument("--format", dest="fmt", choices=report_exporter.FORMATS, default="json")
    parser.add_argument("--out", help="输出文件，默认标准输出")
    parser.add_argument("--record", action="store_true", help="写入运行记录数据库")
    parser.add_argument("--log-level", default=None)
    return parser


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_log_level(args.log_level)
    if args.preset and args.data:
        raise ValidationError("use either --preset or --data, not both")
    try:
        cv_grid = parse_float_list(args.cv_grid)
        rho1_grid = parse_float_list(args.rho1_grid)
    except ValueError as e:
        raise ValidationError(f"invalid grid: {e}")
    run_config = RunConfig(
        command=args.command,
        c_v=args.cv,
        rho1=args.rho1,
        half_width=args.half_width,
        fmt=args.fmt,
        out=args.out,
        data_path=args.data or PRESETS[args.preset or "paper"],
        partition_path=args.partition,
        profile_path=args.profile,
        margin=args.margin,
        epsilon=args.epsilon,
        Lambda=args.Lambda,
        cv_grid=cv_grid,
        rho1_grid=rho1_grid,
        record=args.record,
    )
    run_config.validate()
    return run_config


def dispatch(run_config: RunConfig) -> dict:
    """解析输入并执行对应流水线"""
    command = run_config.command
    if command == "profile":
        partition = parse_partition_file(run_config.partition_path)
        profile = parse_profile_file(run_config.profile_path)
        return run_profile(partition, profile, GasConstants(run_config.c_v),
                           epsilon=run_config.epsilon, margin=run_config.margin,
                           Lambda=run_config.Lambda)

    data: RiemannData = parse_riemann_file(run_config.data_path)
    if command == "sweep":
        return run_sweep(data, run_config.rho1, run_config.cv_grid, run_config.half_width)
    g = GasConstants(run_config.c_v)
    if command == "riemann":
        return run_riemann(data, g)
    if command == "rate":
        return run_rate(data, g, run_config.half_width)
    if command == "subsolution":
        return run_subsolution(data, run_config.rho1, g, run_config.rho1_grid, run_config.half_width)
    return run_counterexample(data, run_config.rho1, g, run_config.half_width)


def run(run_config: RunConfig) -> int:
    """执行并输出报告，返回退出码"""
    try:
        if run_config.record:
            from services.run_recorder import record_run
            run_id, envelope = record_run(run_config.command, lambda: dispatch(run_config),
                                          source="cli", c_v=run_config.c_v, rho1=run_config.rho1)
            logger.info(f"运行已记录: {run_id}")
        else:
            envelope = dispatch(run_config)
    except LabError as e:
        print(f"{e.code}: {e.message}", file=sys.stderr)
        return e.exit_code

    text = report_exporter.export(envelope, run_config.fmt)
    if run_config.out:
        try:
            with open(run_config.out, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as e:
            error = InputError(f"cannot write {run_config.out}: {e.strerror}")
            print(f"{error.code}: {error.message}", file=sys.stderr)
            return error.exit_code
    else:
        sys.stdout.write(text)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    try:
        run_config = parse_args(argv)
    except LabError as e:
        print(f"{e.code}: {e.message}", file=sys.stderr)
        return e.exit_code
    return run(run_config)


if __name__ == "__main__":
    sys.exit(main())
