"""
输入文件解析服务

格式：每行若干个以空白分隔的十进制数；空行与 # 开头的注释行忽略。
- Riemann 数据：两行 "rho v1 v2 p"，第一行为 x2 < 0 一侧
- 单元划分：每行 "volume rho0 theta0"
- 熵剖面：首行 "delta T"，之后每行 "time value"
"""
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

from exceptions import InputError, ParseError
from gas import GasState
from profile_construction import EntropyProfile, PartitionSpec
from riemann import RiemannData
from utils import logger

DECIMAL_PATTERN = re.compile(r'^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$')
TOKEN_PATTERN = re.compile(r'\S+')


@dataclass
class ParsedRow:
    """一行数据及其行号"""
    line: int
    values: List[float]


class InputParser:
    """严格格式的数值表解析器"""

    def parse_rows(self, text: str, columns: int) -> List[ParsedRow]:
        """解析每行恰好 columns 个数的数据行"""
        rows = []
        for line_no, raw in enumerate(text.splitlines(), 1):
            stripped = raw.strip()
            if not stripped or stripped.startswith('#'):
                continue
            rows.append(self._parse_line(raw, line_no, columns))
        return rows

    def _parse_line(self, raw: str, line_no: int, columns: int) -> ParsedRow:
        values = []
        for match in TOKEN_PATTERN.finditer(raw):
            column = match.start() + 1
            token = match.group()
            if len(values) == columns:
                raise ParseError(f"unexpected extra column '{token}'", line_no, column)
            if not DECIMAL_PATTERN.match(token):
                raise ParseError(f"'{token}' is not a decimal number", line_no, column)
            values.append(float(token))
        if len(values) < columns:
            raise ParseError(f"expected {columns} columns, found {len(values)}",
                             line_no, len(raw.rstrip()) + 1)
        return ParsedRow(line=line_no, values=values)

    # ==================== Riemann 数据 ====================

    def parse_riemann_text(self, text: str) -> RiemannData:
        rows = self.parse_rows(text, 4)
        if not rows:
            raise ParseError("empty input: expected two lines 'rho v1 v2 p'", 1, 1)
        if len(rows) != 2:
            line = rows[2].line if len(rows) > 2 else rows[-1].line + 1
            raise ParseError(f"expected exactly two data lines, found {len(rows)}", line, 1)
        states = []
        for row in rows:
            rho, v1, v2, p = row.values
            states.append(self._state(row, rho, v1, v2, p))
        return RiemannData(left=states[0], right=states[1])

    @staticmethod
    def _state(row: ParsedRow, rho, v1, v2, p) -> GasState:
        try:
            return GasState(rho=rho, v1=v1, v2=v2, p=p)
        except InputError as e:
            raise ParseError(e.message, row.line, 1)

    def parse_riemann_file(self, path) -> RiemannData:
        return self.parse_riemann_text(self._read(path))

    # ==================== 单元划分与剖面 ====================

    def parse_partition_text(self, text: str) -> PartitionSpec:
        rows = self.parse_rows(text, 3)
        if not rows:
            raise ParseError("empty input: expected lines 'volume rho0 theta0'", 1, 1)
        for row in rows:
            for column, (name, value) in enumerate(zip(("volume", "rho0", "theta0"), row.values), 1):
                if value <= 0:
                    raise ParseError(f"{name} must be positive", row.line, column)
        return PartitionSpec.from_rows([row.values for row in rows])

    def parse_partition_file(self, path) -> PartitionSpec:
        return self.parse_partition_text(self._read(path))

    def parse_profile_text(self, text: str) -> EntropyProfile:
        header, breakpoints = self._split_profile(text)
        delta, horizon = header.values
        times = tuple(row.values[0] for row in breakpoints)
        values = tuple(row.values[1] for row in breakpoints)
        try:
            return EntropyProfile(delta=delta, T=horizon, breakpoints=times, values=values)
        except InputError as e:
            raise ParseError(e.message, header.line, 1)

    def _split_profile(self, text: str) -> Tuple[ParsedRow, List[ParsedRow]]:
        header = None
        rows = []
        for line_no, raw in enumerate(text.splitlines(), 1):
            stripped = raw.strip()
            if not stripped or stripped.startswith('#'):
                continue
            row = self._parse_line(raw, line_no, 2)
            if header is None:
                header = row
            else:
                rows.append(row)
        if header is None:
            raise ParseError("empty input: expected a header line 'delta T'", 1, 1)
        return header, rows

    def parse_profile_file(self, path) -> EntropyProfile:
        return self.parse_profile_text(self._read(path))

    @staticmethod
    def _read(path) -> str:
        try:
            raw = Path(path).read_bytes()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror}")
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            head = raw[:e.start]
            line = head.count(b"\n") + 1
            column = e.start - (head.rfind(b"\n") + 1) + 1
            raise ParseError(f"invalid UTF-8 byte 0x{raw[e.start]:02x}", line, column)
        logger.debug(f"读取输入文件 {path}")
        return text


# 全局解析器实例
input_parser = InputParser()


def parse_riemann_file(path) -> RiemannData:
    return input_parser.parse_riemann_file(path)


def parse_partition_file(path) -> PartitionSpec:
    return input_parser.parse_partition_file(path)


def parse_profile_file(path) -> EntropyProfile:
    return input_parser.parse_profile_file(path)
