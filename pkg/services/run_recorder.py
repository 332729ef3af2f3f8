"""
运行记录服务

流程：
1. 创建 PROCESSING 记录
2. 执行命令流水线
3. 保存报告并标记 COMPLETED；出错时标记 FAILED 并重新抛出
"""
import json
import time
import uuid
from datetime import datetime
from typing import Any, Callable, Dict, Optional, Tuple

from database import get_db_session
from exceptions import LabError
from models import RunRecord, RunStatus
from utils import logger


def _verdict_of(envelope: Dict[str, Any]) -> Optional[str]:
    verdicts = envelope.get("verdicts") or {}
    for key in ("verdict", "pattern"):
        if verdicts.get(key) is not None:
            return str(verdicts[key])
    if "admissible" in verdicts:
        return "admissible" if verdicts["admissible"] else "not_admissible"
    return None


def record_run(command: str, pipeline: Callable[[], Dict[str, Any]], source: str = "cli",
               c_v: Optional[float] = None, rho1: Optional[float] = None) -> Tuple[str, Dict[str, Any]]:
    """执行并记录一次运行，返回 (run_id, 报告)"""
    run_id = str(uuid.uuid4())
    start_time = datetime.utcnow()
    started = time.monotonic()

    with get_db_session() as db:
        db.add(RunRecord(
            run_id=run_id,
            command=command,
            status=RunStatus.PROCESSING,
            source=source,
            c_v=c_v,
            rho1=rho1,
            started_at=start_time,
        ))

    try:
        envelope = pipeline()
    except LabError as e:
        _finalize(run_id, started, status=RunStatus.FAILED,
                  error_name=e.code, error_message=e.message)
        logger.warning(f"运行 {run_id} ({command}) 失败: {e.code}: {e.message}")
        raise
    except Exception as e:
        _finalize(run_id, started, status=RunStatus.FAILED,
                  error_name=type(e).__name__, error_message=str(e)[:500])
        raise

    _finalize(
        run_id, started, status=RunStatus.COMPLETED,
        inputs=json.dumps(envelope.get("inputs"), sort_keys=True),
        outputs=json.dumps(envelope, sort_keys=True),
        verdict=_verdict_of(envelope),
        max_residual=(envelope.get("residuals") or {}).get("max_residual"),
    )
    logger.info(f"运行 {run_id} ({command}) 完成")
    return run_id, envelope


def _finalize(run_id: str, started: float, status: RunStatus, **fields):
    with get_db_session() as db:
        record = db.query(RunRecord).filter(RunRecord.run_id == run_id).first()
        if record is None:
            logger.error(f"运行记录 {run_id} 不存在")
            return
        record.status = status
        record.completed_at = datetime.utcnow()
        record.processing_time_seconds = round(time.monotonic() - started, 6)
        for name, value in fields.items():
            if name == "max_residual" and not isinstance(value, (int, float)):
                value = None
            setattr(record, name, value)
