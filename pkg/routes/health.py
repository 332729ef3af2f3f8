"""
健康检查路由
"""
from fastapi import APIRouter

from config import config

router = APIRouter(tags=["Health"])


@router.get("/health")
async def health_check():
    """健康检查接口"""
    return {
        "status": "healthy",
        "version": config.version,
        "default_c_v": config.lab.c_v,
        "default_rho1": config.lab.rho1,
    }
