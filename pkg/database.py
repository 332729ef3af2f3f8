"""
数据库管理模块
"""
import os
from contextlib import contextmanager

from sqlalchemy import create_engine, event
from sqlalchemy.orm import sessionmaker

from config import config
from models import Base
from utils import logger

engine = None
SessionLocal = None
DATABASE_PATH = None


def configure_database(data_dir: str = None):
    """按数据目录创建引擎与 Session 工厂（测试中指向临时目录）"""
    global engine, SessionLocal, DATABASE_PATH
    data_dir = data_dir or config.server.data_dir
    os.makedirs(data_dir, exist_ok=True)
    DATABASE_PATH = os.path.join(data_dir, 'runs.db')
    engine = create_engine(
        f"sqlite:///{DATABASE_PATH}",
        connect_args={"check_same_thread": False},  # SQLite需要此配置
        pool_pre_ping=True,
        echo=False,
    )

    @event.listens_for(engine, "connect")
    def set_sqlite_pragma(dbapi_connection, connection_record):
        cursor = dbapi_connection.cursor()
        cursor.execute("PRAGMA journal_mode=WAL")
        cursor.execute("PRAGMA synchronous=NORMAL")
        cursor.close()

    SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    return engine


def init_database(data_dir: str = None):
    """初始化数据库，创建所有表"""
    if engine is None or data_dir is not None:
        configure_database(data_dir)
    Base.metadata.create_all(bind=engine)
    logger.info(f"数据库初始化完成: {DATABASE_PATH}")


def get_db():
    """获取数据库Session（用于FastAPI依赖注入）"""
    if SessionLocal is None:
        init_database()
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()


@contextmanager
def get_db_session():
    """获取数据库Session（用于运行记录）"""
    if SessionLocal is None:
        init_database()
    db = SessionLocal()
    try:
        yield db
        db.commit()
    except Exception as e:
        db.rollback()
        logger.error(f"数据库事务回滚: {e}", exc_info=True)
        raise
    finally:
        db.close()
