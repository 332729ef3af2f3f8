"""
Entropy Lab 服务入口

模块化架构：
- routes/: API 路由模块
- services/: 命令流水线、输入解析、报告导出、运行记录
"""
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from config import config
from database import init_database
from exceptions import InputError, LabError, SolverError
from utils import logger

# 创建 FastAPI 应用
app = FastAPI(
    title="Entropy Lab Service",
    description="熵率准则反例的数值复现服务",
    version=config.version
)

# 初始化数据库
init_database()

# ==================== 中间件 ====================

# CORS中间件
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(LabError)
async def lab_exception_handler(request: Request, exc: LabError):
    """输入错误 400，求解错误 422"""
    if isinstance(exc, InputError):
        status_code = 400
    elif isinstance(exc, SolverError):
        status_code = 422
    else:
        status_code = 500
    logger.warning(f"{request.url.path}: {exc.code}: {exc.message}")
    return JSONResponse(status_code=status_code, content=exc.to_dict())


@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """全局异常处理器"""
    logger.exception(f"未捕获的异常: {exc}")
    return JSONResponse(
        status_code=500,
        content={"detail": "服务器内部错误", "error": str(exc)[:200]}
    )


@app.get("/")
async def index():
    return {"message": "Entropy Lab Service", "version": config.version}


# ==================== 注册路由 ====================

from routes.health import router as health_router
from routes.lab import router as lab_router
from routes.runs import router as runs_router

app.include_router(health_router)
app.include_router(lab_router)
app.include_router(runs_router)


# ==================== 启动入口 ====================

if __name__ == "__main__":
    import uvicorn

    logger.info(f"启动 Entropy Lab 服务 v{config.version}")
    logger.info(f"运行记录目录: {config.server.data_dir}")

    uvicorn.run(
        app,
        host=config.server.host,
        port=config.server.port,
        log_level=config.server.log_level.lower()
    )
