"""
Experiment runner: run configuration, simulation drivers and the command line.
"""

from acflow.runner.config import PRESETS, RunConfig, TauRule, dump_config, load_run_config, validate_config
from acflow.runner.simulation import RunResult, convergence_table, run_convergence, run_single, simulate_level

__all__ = [
    'RunConfig', 'TauRule', 'PRESETS', 'load_run_config', 'validate_config', 'dump_config',
    'RunResult', 'simulate_level', 'run_single', 'run_convergence', 'convergence_table',
]
