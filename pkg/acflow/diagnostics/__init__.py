"""
Error norms, convergence rates, energy and runtime monitors.
"""

from acflow.diagnostics.energy import ENERGY_COMPONENTS, energy, energy_components
from acflow.diagnostics.monitors import ErrorReport, Monitors, divergence_norm, error_report, monitors
from acflow.diagnostics.norms import convergence_rate, error_norm, relative_error

__all__ = [
    'error_norm', 'relative_error', 'convergence_rate',
    'energy', 'energy_components', 'ENERGY_COMPONENTS',
    'Monitors', 'monitors', 'divergence_norm', 'ErrorReport', 'error_report',
]
