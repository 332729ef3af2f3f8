"""
测试公共配置
"""
import os
import sys
import tempfile

# 运行记录数据库指向临时目录，必须在导入 config 之前设置
os.environ.setdefault("LAB_DATA_DIR", tempfile.mkdtemp(prefix="entropy-lab-"))

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from gas import GasConstants, GasState
from riemann import RiemannData


@pytest.fixture
def reference_data():
    """x2 < 0: (1, 0, 0, 2)；x2 > 0: (10, 0, -100, 1)"""
    return RiemannData(
        left=GasState(rho=1.0, v1=0.0, v2=0.0, p=2.0),
        right=GasState(rho=10.0, v1=0.0, v2=-100.0, p=1.0),
    )


@pytest.fixture
def monatomic():
    return GasConstants(c_v=1.5)
