"""
统计模块 - 轨迹泛函与记录器
"""

from .functionals import z_of, z_of_raw, g_of, l_of_B, conditional_second_moment
from .trajectory import (
    CSV_COLUMNS,
    RecordPlan,
    StatRow,
    TrajectoryAudit,
    Trajectory,
)

__all__ = [
    'z_of',
    'z_of_raw',
    'g_of',
    'l_of_B',
    'conditional_second_moment',
    'CSV_COLUMNS',
    'RecordPlan',
    'StatRow',
    'TrajectoryAudit',
    'Trajectory',
]
