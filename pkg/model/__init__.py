"""
模型模块 - 加权印度自助餐过程的状态机
"""

from .params import (
    WeightKind,
    WeightSpec,
    IntervalSet,
    ModelParams,
    TheoremApplicability,
    validate_params,
    constraint_violations,
)
from .dish import Dish, DishTable
from .state import (
    BuffetState,
    CustomerOutcome,
    lambda_of,
    inclusion_probability,
    inclusion_probabilities,
)
from .buffet import (
    new_state,
    step,
    step_counts,
    run_trajectory,
    expected_L_path,
    lambda_bound_constant,
    h_grid_sup,
    x_h_grid_sup,
)

__all__ = [
    'WeightKind',
    'WeightSpec',
    'IntervalSet',
    'ModelParams',
    'TheoremApplicability',
    'validate_params',
    'constraint_violations',
    'Dish',
    'DishTable',
    'BuffetState',
    'CustomerOutcome',
    'lambda_of',
    'inclusion_probability',
    'inclusion_probabilities',
    'new_state',
    'step',
    'step_counts',
    'run_trajectory',
    'expected_L_path',
    'lambda_bound_constant',
    'h_grid_sup',
    'x_h_grid_sup',
]
