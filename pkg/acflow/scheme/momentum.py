"""
Momentum step.

Solves for m^{n+1}, with m* = rho^{n+1} u^n nodally and d = 2 (1 for the
single-diffusion explicit form):

    (m^{n+1} - m^n, v)/tau + d nu_bar (eps(m^{n+1} - m*), eps(v))
        + gamma (div(m^{n+1} - m*), div v) + [(u^n . grad) m^{n+1}, v]
      = -d (eta^{n+1} eps(u^n), eps(v)) - (grad p^n, v) - lambda_eff (div u^n, div v) + (f^{n+1}, v)

The bracketed convection is implicit in the semi-implicit variant and moves to
the right-hand side, acting on m^n, in the explicit variant. The remaining
left-hand matrix does not depend on the step and is factored once.
"""

import logging
from dataclasses import replace
from typing import Callable, Optional

import numpy as np
from scipy import sparse

from acflow.config.constants import SOLVER_RTOL
from acflow.core.exceptions import InvalidStateError
from acflow.fem import assembly
from acflow.fem.constraints import DirichletOperator, constrain_matrix, constrain_rhs
from acflow.fem.fields import ScalarField, VectorField
from acflow.fem.solvers import SolverStats, solve_preconditioned
from acflow.fem.spaces import TaylorHood
from acflow.scheme.parameters import SchemeParams
from acflow.scheme.state import FlowState, nodal_momentum

logger = logging.getLogger(__name__)


class MomentumOperator:
    """Time-independent momentum matrices of one run plus the per-step solve."""

    def __init__(self, spaces: TaylorHood, params: SchemeParams, boundary_dofs: Optional[np.ndarray] = None,
                 stats: Optional[SolverStats] = None, solver: str = 'direct'):
        self.spaces = spaces
        self.params = params
        self.stats = stats if stats is not None else SolverStats()
        space = spaces.velocity

        if boundary_dofs is None:
            boundary_dofs = space.vector_dofs(space.boundary_dofs())
        self.dofs = np.asarray(boundary_dofs, dtype=np.int64)

        self.mass = assembly.assemble_form(space, assembly.mass(vector=True))
        self.strain = assembly.assemble_form(space, assembly.stiffness_eps())
        self.grad_div = assembly.assemble_form(space, assembly.grad_div())
        self.gradient = assembly.assemble_form(space, assembly.gradient(), trial_space=spaces.pressure)

        # d nu_bar E + gamma G acts on both m^{n+1} and m*
        self.relaxation = (params.diffusion_factor * params.nu_bar * self.strain
                           + params.gamma_grad_div * self.grad_div).tocsr()
        self.matrix = self.assemble_operator()
        self.operator = DirichletOperator(self.matrix, self.dofs, method=solver,
                                          label='momentum', stats=self.stats)
        logger.info(f"Momentum operator: {params.variant}, {2 * space.n_dofs} unknowns, "
                    f"{self.dofs.size} constrained, gamma={params.gamma_grad_div:.6g}")

    def assemble_operator(self) -> sparse.csr_matrix:
        """M/tau + d nu_bar E + gamma G."""
        return (self.mass / self.params.tau + self.relaxation).tocsr()

    def rhs(self, state: FlowState, rho_next: ScalarField, eta_next: ScalarField,
            source: Optional[Callable] = None, t_next: float = 0.0) -> np.ndarray:
        space = self.spaces.velocity
        params = self.params
        m_star = nodal_momentum(rho_next, state.u).coefficients
        viscous = assembly.assemble_form(space, assembly.weighted_stiffness_eps(eta_next))

        rhs = (self.mass @ state.m.coefficients / params.tau
               + self.relaxation @ m_star
               - params.diffusion_factor * (viscous @ state.u.coefficients)
               - self.gradient @ state.p.coefficients
               - params.lambda_eff * (self.grad_div @ state.u.coefficients))
        if source is not None:
            rhs = rhs + assembly.assemble_rhs(space, assembly.source(source, vector=True), t=t_next)
        if params.variant == 'explicit':
            convection = assembly.assemble_form(space, assembly.convection(state.u, vector=True))
            rhs = rhs - convection @ state.m.coefficients
        return rhs

    def solve(self, state: FlowState, rho_next: ScalarField, eta_next: ScalarField,
              source: Optional[Callable] = None, boundary_values=0.0, t_next: float = 0.0) -> VectorField:
        """m^{n+1} with the given Dirichlet values on the constrained dofs."""
        rhs = self.rhs(state, rho_next, eta_next, source, t_next)
        space = self.spaces.velocity

        if self.params.variant == 'explicit':
            coefficients = self.operator.solve(rhs, boundary_values)
        else:
            convection = assembly.assemble_form(space, assembly.convection(state.u, vector=True))
            full = (self.matrix + convection).tocsr()
            coefficients = solve_preconditioned(
                constrain_matrix(full, self.dofs),
                constrain_rhs(full, rhs, self.dofs, boundary_values),
                self.operator.factorization, rtol=SOLVER_RTOL, label='momentum', stats=self.stats,
            )
        if not np.all(np.isfinite(coefficients)):
            raise InvalidStateError("momentum step produced non-finite values")
        return VectorField(space, coefficients)


def step_momentum_semi_implicit(state: FlowState, params: SchemeParams, spaces: TaylorHood,
                                rho_next: ScalarField, eta_next: ScalarField,
                                source=None, boundary_values=0.0, t_next: float = 0.0) -> VectorField:
    """One-off semi-implicit momentum solve; runs should reuse a MomentumOperator."""
    if params.variant != 'semi_implicit':
        params = _with_variant(params, 'semi_implicit')
    return MomentumOperator(spaces, params).solve(state, rho_next, eta_next, source, boundary_values, t_next)


def step_momentum_explicit(state: FlowState, params: SchemeParams, spaces: TaylorHood,
                           rho_next: ScalarField, eta_next: ScalarField,
                           source=None, boundary_values=0.0, t_next: float = 0.0) -> VectorField:
    """One-off explicit momentum solve; runs should reuse a MomentumOperator."""
    if params.variant != 'explicit':
        params = _with_variant(params, 'explicit')
    return MomentumOperator(spaces, params).solve(state, rho_next, eta_next, source, boundary_values, t_next)


def _with_variant(params: SchemeParams, variant: str) -> SchemeParams:
    return replace(params, variant=variant)
