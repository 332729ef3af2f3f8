"""
运行记录 API 路由
"""
from fastapi import APIRouter, Depends, HTTPException, Query
from sqlalchemy.orm import Session

from database import get_db
from run_statistics import StatisticsService

router = APIRouter(prefix="/api/runs", tags=["Runs"])


@router.get("")
async def list_runs(
    limit: int = Query(50, ge=1, le=500),
    offset: int = Query(0, ge=0),
    command: str = None,
    status: str = None,
    order: str = Query('desc', pattern="^(asc|desc)$"),
    db: Session = Depends(get_db)
):
    """获取运行记录列表"""
    service = StatisticsService(db)
    return service.get_recent_runs(limit, offset, command=command, status=status, order=order)


@router.get("/stats/overview")
async def get_overview(db: Session = Depends(get_db)):
    """获取概览统计"""
    service = StatisticsService(db)
    return service.get_overview()


@router.get("/stats/cv-evidence")
async def get_cv_evidence(db: Session = Depends(get_db)):
    """按 c_v 汇总的反例证据"""
    service = StatisticsService(db)
    return service.get_cv_evidence()


@router.get("/{run_id}")
async def get_run(run_id: str, db: Session = Depends(get_db)):
    """获取单次运行详情（含完整报告）"""
    service = StatisticsService(db)
    run = service.get_run(run_id)
    if run is None:
        raise HTTPException(status_code=404, detail="运行记录不存在")
    return run
