"""
pytest 配置 - 项目根目录加入导入路径，注册 slow 标记
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: desk-scale Monte Carlo acceptance runs")
