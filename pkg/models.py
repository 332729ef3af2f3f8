"""
数据库模型定义
使用 SQLAlchemy ORM
"""
import enum
import json
from datetime import datetime

from sqlalchemy import Column, DateTime, Enum as SQLEnum, Float, Integer, String, Text
from sqlalchemy.ext.declarative import declarative_base

Base = declarative_base()


class RunStatus(enum.Enum):
    """运行状态枚举"""
    PENDING = "pending"
    PROCESSING = "processing"
    COMPLETED = "completed"
    FAILED = "failed"


class RunRecord(Base):
    """运行记录表"""
    __tablename__ = 'run_records'

    id = Column(Integer, primary_key=True, autoincrement=True)

    # 任务标识
    run_id = Column(String(36), unique=True, nullable=False, index=True)
    command = Column(String(32), nullable=False, index=True)
    status = Column(SQLEnum(RunStatus), default=RunStatus.PENDING)
    source = Column(String(16), default="cli")  # cli, api

    # 参数
    c_v = Column(Float)
    rho1 = Column(Float)

    # 结果（JSON 文本，与 CLI 输出的 JSON 报告一致）
    inputs = Column(Text)
    outputs = Column(Text)
    verdict = Column(String(64), index=True)
    max_residual = Column(Float)

    # 时间信息
    created_at = Column(DateTime, default=datetime.utcnow)
    started_at = Column(DateTime)
    completed_at = Column(DateTime)
    processing_time_seconds = Column(Float)

    # 错误信息
    error_name = Column(String(64))
    error_message = Column(Text)

    def to_dict(self, include_payload: bool = False):
        """转换为字典"""
        result = {
            'id': self.id,
            'run_id': self.run_id,
            'command': self.command,
            'status': self.status.value if self.status else None,
            'source': self.source,
            'c_v': self.c_v,
            'rho1': self.rho1,
            'verdict': self.verdict,
            'max_residual': self.max_residual,
            'created_at': self.created_at.isoformat() if self.created_at else None,
            'completed_at': self.completed_at.isoformat() if self.completed_at else None,
            'processing_time_seconds': self.processing_time_seconds,
            'error_name': self.error_name,
            'error_message': self.error_message,
        }
        if include_payload:
            result['inputs'] = json.loads(self.inputs) if self.inputs else None
            result['outputs'] = json.loads(self.outputs) if self.outputs else None
        return result
