"""
Artificial-compressibility time marching: parameters, momentum, pressure and the step driver.
"""

from acflow.scheme.momentum import MomentumOperator, step_momentum_explicit, step_momentum_semi_implicit
from acflow.scheme.parameters import SchemeParams, init_parameters
from acflow.scheme.pressure import PressureUpdater, recover_velocity, update_pressure
from acflow.scheme.state import FlowState, initial_state, nodal_momentum
from acflow.scheme.stepper import STAGES, FlowProblem, FlowSolver, advance

__all__ = [
    'SchemeParams', 'init_parameters',
    'FlowState', 'initial_state', 'nodal_momentum',
    'MomentumOperator', 'step_momentum_semi_implicit', 'step_momentum_explicit',
    'PressureUpdater', 'recover_velocity', 'update_pressure',
    'FlowProblem', 'FlowSolver', 'advance', 'STAGES',
]
