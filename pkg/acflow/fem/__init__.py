"""
Finite element core: P1/P2 Lagrange spaces, assembly, constraints and solvers.
"""

from acflow.fem.assembly import (
    Form, LinearForm, applied, assemble_form, assemble_rhs, convection,
    diffusion_scalar, divergence, flux_divergence, grad_div, gradient,
    is_symmetric, mass, source, stiffness_eps, weighted_mass,
    weighted_stiffness_eps,
)
from acflow.fem.constraints import (
    ConstrainedSystem, DirichletOperator, apply_dirichlet, constrain_matrix, constrain_rhs,
)
from acflow.fem.fields import (
    ScalarField, VectorField, divergence_at_quadrature, evaluate, evaluate_gradient,
    evaluate_points, from_nodal, integrate, interpolate, strain_at_quadrature,
    values_at_quadrature, zero_field,
)
from acflow.fem.solvers import Factorization, SolverStats, factorize, solve, solve_preconditioned
from acflow.fem.spaces import FeSpace, TaylorHood

__all__ = [
    'FeSpace', 'TaylorHood',
    'ScalarField', 'VectorField', 'interpolate', 'evaluate', 'evaluate_points',
    'evaluate_gradient', 'values_at_quadrature', 'strain_at_quadrature',
    'divergence_at_quadrature', 'integrate', 'zero_field', 'from_nodal',
    'Form', 'LinearForm', 'assemble_form', 'assemble_rhs', 'is_symmetric',
    'mass', 'weighted_mass', 'stiffness_eps', 'weighted_stiffness_eps', 'grad_div',
    'convection', 'diffusion_scalar', 'gradient', 'divergence',
    'source', 'applied', 'flux_divergence',
    'apply_dirichlet', 'constrain_matrix', 'constrain_rhs', 'ConstrainedSystem', 'DirichletOperator',
    'Factorization', 'SolverStats', 'factorize', 'solve', 'solve_preconditioned',
]
