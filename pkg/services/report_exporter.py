"""
报告导出服务

支持 JSON、CSV 和文本格式导出。JSON 报告结构固定为
{command, inputs, outputs, residuals, verdicts}，键排序、全精度、不含时间戳。
"""
import csv
import io
import json
import math
from typing import Any, Dict, Iterable, List, Tuple

from utils import format_significant

SWEEP_COLUMNS = ["cv", "rho1", "rate_self_similar", "rate_fan", "verdict", "max_residual"]


def _sanitize(value):
    """非有限浮点数转为字符串，保证输出为标准 JSON"""
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


def _flatten(value, prefix: str = "") -> Iterable[Tuple[str, Any]]:
    if isinstance(value, dict):
        for key in sorted(value):
            yield from _flatten(value[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, list):
        for index, item in enumerate(value):
            yield from _flatten(item, f"{prefix}[{index}]")
    else:
        yield prefix, value


class ReportExporter:
    """报告导出器"""

    FORMATS = ("json", "csv", "text")

    @staticmethod
    def build_envelope(command: str, inputs: Dict[str, Any], outputs: Dict[str, Any],
                       residuals: Dict[str, Any], verdicts: Dict[str, Any]) -> Dict[str, Any]:
        """统一报告结构"""
        return _sanitize({
            "command": command,
            "inputs": inputs,
            "outputs": outputs,
            "residuals": residuals,
            "verdicts": verdicts,
        })

    def export(self, envelope: Dict[str, Any], fmt: str) -> str:
        if fmt == "json":
            return self.export_json(envelope)
        if fmt == "csv":
            return self.export_csv(envelope)
        if fmt == "text":
            return self.export_text(envelope)
        raise ValueError(f"unknown format {fmt}")

    def export_json(self, envelope: Dict[str, Any]) -> str:
        """导出为 JSON：键排序，浮点数按 repr 全精度输出"""
        return json.dumps(envelope, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def export_csv(self, envelope: Dict[str, Any]) -> str:
        """导出为 CSV：扫描结果逐点一行，其余命令展开为 key,value"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if envelope.get("command") == "sweep":
            writer.writerow(SWEEP_COLUMNS)
            for row in self.sweep_rows(envelope):
                writer.writerow([row[column] for column in SWEEP_COLUMNS])
        else:
            writer.writerow(["key", "value"])
            for key, value in _flatten(envelope):
                writer.writerow([key, "" if value is None else value])
        return buffer.getvalue()

    @staticmethod
    def sweep_rows(envelope: Dict[str, Any]) -> List[Dict[str, Any]]:
        rows = []
        for point in envelope.get("outputs", {}).get("points", []):
            rows.append({
                "cv": point.get("c_v"),
                "rho1": point.get("rho1"),
                "rate_self_similar": point.get("self_similar_rate"),
                "rate_fan": point.get("fan_rate"),
                "verdict": point.get("verdict"),
                "max_residual": point.get("max_residual"),
            })
        return rows

    def export_text(self, envelope: Dict[str, Any]) -> str:
        """导出为文本：数值保留 6 位有效数字"""
        lines = [f"# {envelope.get('command', '-')}"]
        for section in ("inputs", "outputs", "residuals", "verdicts"):
            lines.append("")
            lines.append(f"[{section}]")
            for key, value in _flatten(envelope.get(section) or {}):
                lines.append(f"{key} = {format_significant(value)}")
        return "\n".join(lines) + "\n"


# 全局导出器实例
report_exporter = ReportExporter()
