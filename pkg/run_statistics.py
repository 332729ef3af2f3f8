"""
统计服务模块
提供运行记录查询与汇总
"""
import json
from collections import defaultdict
from typing import Any, Dict, List, Optional

from sqlalchemy import desc, func
from sqlalchemy.orm import Session

from models import RunRecord, RunStatus


class StatisticsService:
    """统计服务"""

    def __init__(self, db: Session):
        self.db = db

    # ==================== 全局统计 ====================

    def get_overview(self) -> Dict[str, Any]:
        """获取概览统计"""
        total_runs = self.db.query(func.count(RunRecord.id)).scalar() or 0
        by_status = dict(
            self.db.query(RunRecord.status, func.count(RunRecord.id)).group_by(RunRecord.status).all()
        )
        by_command = dict(
            self.db.query(RunRecord.command, func.count(RunRecord.id)).group_by(RunRecord.command).all()
        )
        by_verdict = dict(
            self.db.query(RunRecord.verdict, func.count(RunRecord.id)).filter(
                RunRecord.verdict.isnot(None)
            ).group_by(RunRecord.verdict).all()
        )
        avg_time = self.db.query(func.avg(RunRecord.processing_time_seconds)).filter(
            RunRecord.status == RunStatus.COMPLETED
        ).scalar() or 0

        return {
            'total_runs': total_runs,
            'completed_runs': by_status.get(RunStatus.COMPLETED, 0),
            'failed_runs': by_status.get(RunStatus.FAILED, 0),
            'processing_runs': by_status.get(RunStatus.PROCESSING, 0),
            'by_command': by_command,
            'by_verdict': by_verdict,
            'avg_processing_time': round(avg_time, 4),
        }

    # ==================== 运行记录查询 ====================

    def get_recent_runs(self, limit: int = 50, offset: int = 0, command: str = None,
                        status: str = None, order: str = 'desc') -> Dict[str, Any]:
        """获取最近的运行记录（支持过滤）"""
        query = self.db.query(RunRecord)
        if command:
            query = query.filter(RunRecord.command == command)
        if status:
            try:
                query = query.filter(RunRecord.status == RunStatus(status))
            except ValueError:
                pass
        total = query.count()
        ordering = desc(RunRecord.id) if order == 'desc' else RunRecord.id
        records = query.order_by(ordering).offset(offset).limit(limit).all()
        return {
            'total': total,
            'items': [r.to_dict() for r in records],
        }

    def get_run(self, run_id: str) -> Optional[Dict[str, Any]]:
        record = self.db.query(RunRecord).filter(RunRecord.run_id == run_id).first()
        return record.to_dict(include_payload=True) if record else None

    # ==================== c_v 证据表 ====================

    def get_cv_evidence(self) -> List[Dict[str, Any]]:
        """
        汇总已完成的 sweep 与 counterexample 运行，按 c_v 给出正结论次数

        只有 c_v = 1 和 3/2 有文献结论，其余行标记为探索性。
        """
        records = self.db.query(RunRecord).filter(
            RunRecord.status == RunStatus.COMPLETED,
            RunRecord.command.in_(["sweep", "counterexample"]),
        ).order_by(RunRecord.id).all()

        table: Dict[float, Dict[str, Any]] = defaultdict(lambda: {
            'runs': 0, 'positive': 0, 'claimed': False,
            'latest_self_similar_rate': None, 'latest_fan_rate': None,
        })
        for record in records:
            envelope = json.loads(record.outputs) if record.outputs else {}
            for point in self._points(record.command, envelope):
                row = table[point['c_v']]
                row['runs'] += 1
                row['positive'] += 1 if point['positive'] else 0
                row['claimed'] = point['claimed']
                row['latest_self_similar_rate'] = point['self_similar_rate']
                row['latest_fan_rate'] = point['fan_rate']

        return [
            dict(c_v=c_v, exploratory=not row['claimed'], **row)
            for c_v, row in sorted(table.items())
        ]

    @staticmethod
    def _points(command: str, envelope: Dict[str, Any]) -> List[Dict[str, Any]]:
        positive = "SelfSimilarNotEntropyRateAdmissible"
        if command == "sweep":
            return [
                {
                    'c_v': p.get('c_v'),
                    'positive': p.get('verdict') == positive,
                    'claimed': bool(p.get('claimed')),
                    'self_similar_rate': p.get('self_similar_rate'),
                    'fan_rate': p.get('fan_rate'),
                }
                for p in envelope.get('outputs', {}).get('points', [])
                if isinstance(p.get('c_v'), (int, float))
            ]
        verdicts = envelope.get('verdicts', {})
        outputs = envelope.get('outputs', {})
        c_v = envelope.get('inputs', {}).get('c_v')
        if not isinstance(c_v, (int, float)):
            return []
        return [{
            'c_v': c_v,
            'positive': verdicts.get('verdict') == positive,
            'claimed': bool(verdicts.get('claimed')),
            'self_similar_rate': outputs.get('self_similar_rate'),
            'fan_rate': outputs.get('fan_rate'),
        }]
