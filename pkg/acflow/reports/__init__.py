"""
Report generation: SVG convergence plots.
"""

from acflow.reports.plot_generator import build_convergence_drawing, generate_convergence_plot

__all__ = ['build_convergence_drawing', 'generate_convergence_plot']
