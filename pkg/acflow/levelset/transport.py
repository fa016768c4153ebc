"""
Level-set transport with first-order artificial viscosity and optional compression.

Both steppers solve
    (phi^{n+1}/tau, psi) + (nu_h grad phi^{n+1}, grad psi) + convection
        = (phi^n/tau, psi) + (F(phi^n), grad psi) + (f_phi, psi)
with nu_h = c_visc * h_K and the compression flux
    F = c_comp * c_visc * phi (1 - phi) grad phi / |grad phi|,
taken as zero wherever |grad phi| <= grad_floor.
The semi-implicit stepper treats convection with u^n acting on phi^{n+1};
the explicit stepper moves it to the right-hand side, so its matrix never changes.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import sparse

from acflow.config.constants import DEFAULT_C_COMP, DEFAULT_C_VISC, DEFAULT_GRAD_FLOOR, SOLVER_RTOL
from acflow.core.exceptions import InvalidParameterError, InvalidStateError, SpaceMismatchError
from acflow.fem import assembly
from acflow.fem.constraints import DirichletOperator, constrain_matrix, constrain_rhs
from acflow.fem.fields import ScalarField, VectorField, evaluate_gradient, values_at_quadrature
from acflow.fem.solvers import SolverStats, solve_preconditioned
from acflow.fem.spaces import FeSpace

logger = logging.getLogger(__name__)

BC_MODES = ('dirichlet_exact', 'natural')
VARIANTS = ('semi_implicit', 'explicit')


@dataclass(frozen=True)
class LevelSetParams:
    c_visc: float = DEFAULT_C_VISC
    c_comp: float = DEFAULT_C_COMP
    grad_floor: float = DEFAULT_GRAD_FLOOR

    def __post_init__(self):
        if self.c_visc < 0.0:
            raise InvalidParameterError(f"c_visc must be >= 0, got {self.c_visc}")
        if self.c_comp < 0.0:
            raise InvalidParameterError(f"c_comp must be >= 0, got {self.c_comp}")
        if not self.grad_floor > 0.0:
            raise InvalidParameterError(f"grad_floor must be > 0, got {self.grad_floor}")


def overshoot(phi) -> float:
    """max(0, max phi - 1) + max(0, -min phi) over the nodal values."""
    values = phi.coefficients if isinstance(phi, ScalarField) else np.asarray(phi, dtype=float)
    return float(max(0.0, values.max() - 1.0) + max(0.0, -values.min()))


def sharp_disc(center=(0.0, 0.0), radius: float = 0.25) -> Callable:
    """Indicator of the open disc |x - center| < radius, as f(points, t)."""
    center = np.asarray(center, dtype=float)

    def indicator(points, t=0.0):
        points = np.asarray(points, dtype=float)
        return (np.linalg.norm(points - center, axis=-1) < radius).astype(float)

    return indicator


def artificial_viscosity(space: FeSpace, params: LevelSetParams) -> np.ndarray:
    """nu_h = c_visc * h_K at every quadrature point, (m, n_quad)."""
    return params.c_visc * np.repeat(space.mesh.h_local[:, None], space.jxw.shape[1], axis=1)


def compression_flux(phi: ScalarField, params: LevelSetParams) -> np.ndarray:
    """Compression flux at quadrature points, (m, n_quad, 2)."""
    values = values_at_quadrature(phi)
    grad = evaluate_gradient(phi)
    norm = np.linalg.norm(grad, axis=-1)
    # roundoff gradients of a flat phi carry no direction
    flat = norm <= params.grad_floor
    magnitude = np.where(flat, 1.0, norm)
    scale = np.where(flat, 0.0, params.c_comp * params.c_visc * values * (1.0 - values) / magnitude)
    return scale[..., None] * grad


def _check_inputs(phi: ScalarField, u: VectorField, space: FeSpace):
    for field in (phi, u):
        space.check_same_mesh(field.space)
        if field.space.degree != space.degree:
            raise SpaceMismatchError(f"level-set step expects P{space.degree} fields, got P{field.space.degree}")
    if not np.all(np.isfinite(phi.coefficients)) or not np.all(np.isfinite(u.coefficients)):
        raise InvalidStateError("NaN or Inf in level-set step inputs")


class LevelSetStepper:
    """Advances phi on a fixed P2 space with a fixed tau.

    The matrix M/tau + K(nu_h) is assembled and factored once; the semi-implicit
    variant adds the convection matrix every step and solves with GMRES
    preconditioned by that factorization.
    """

    def __init__(self, space: FeSpace, tau: float, params: LevelSetParams = None,
                 variant: str = 'semi_implicit', bc_mode: str = 'natural',
                 stats: Optional[SolverStats] = None, solver: str = 'direct'):
        if not tau > 0.0:
            raise InvalidParameterError(f"tau must be positive, got {tau}")
        if variant not in VARIANTS:
            raise InvalidParameterError(f"unknown level-set variant '{variant}'")
        if bc_mode not in BC_MODES:
            raise InvalidParameterError(f"unknown level-set boundary mode '{bc_mode}'")
        self.space = space
        self.tau = float(tau)
        self.params = params or LevelSetParams()
        self.variant = variant
        self.bc_mode = bc_mode
        self.stats = stats if stats is not None else SolverStats()

        self.mass = assembly.assemble_form(space, assembly.mass())
        self.dofs = space.boundary_dofs() if bc_mode == 'dirichlet_exact' else np.zeros(0, dtype=np.int64)
        self.matrix = self.assemble_operator()
        self.operator = DirichletOperator(self.matrix, self.dofs, method=solver,
                                          label='levelset', stats=self.stats)
        logger.info(
            f"Level-set stepper: {variant}, bc={bc_mode}, c_visc={self.params.c_visc}, "
            f"c_comp={self.params.c_comp}, {space.n_dofs} dofs"
        )

    def assemble_operator(self) -> sparse.csr_matrix:
        """M/tau + K(nu_h); independent of the step."""
        nu_h = artificial_viscosity(self.space, self.params)
        stiffness = assembly.assemble_form(self.space, assembly.diffusion_scalar(nu_h))
        return (self.mass / self.tau + stiffness).tocsr()

    def _rhs(self, phi: ScalarField, t_next: float, source) -> np.ndarray:
        rhs = self.mass @ phi.coefficients / self.tau
        if self.params.c_comp != 0.0:
            flux = compression_flux(phi, self.params)
            rhs = rhs + assembly.assemble_rhs(self.space, assembly.flux_divergence(flux))
        if source is not None:
            rhs = rhs + assembly.assemble_rhs(self.space, assembly.source(source), t=t_next)
        return rhs

    def _boundary_values(self, boundary, t_next: float) -> np.ndarray:
        if self.dofs.size == 0:
            return np.zeros(0)
        if boundary is None:
            raise InvalidParameterError("dirichlet_exact level-set boundary needs boundary data")
        if callable(boundary):
            points = self.space.dof_coordinates[self.dofs]
            return np.asarray(boundary(points, t_next), dtype=float) * np.ones(self.dofs.size)
        return np.asarray(boundary, dtype=float) * np.ones(self.dofs.size)

    def step(self, phi: ScalarField, u: VectorField, t_next: float = 0.0,
             source: Optional[Callable] = None, boundary=None) -> ScalarField:
        """One step from phi^n with velocity u^n.

        Args:
            phi: level set at t^n (P2)
            u: velocity at t^n on the same space
            t_next: t^{n+1}, where the source and boundary data are evaluated
            source: f_phi(points, t) or None
            boundary: g(points, t), an array or a constant for dirichlet_exact

        Returns:
            ScalarField phi^{n+1}
        """
        _check_inputs(phi, u, self.space)
        rhs = self._rhs(phi, t_next, source)
        values = self._boundary_values(boundary, t_next)

        convection = assembly.assemble_form(self.space, assembly.convection(u))
        if self.variant == 'explicit':
            rhs = rhs - convection @ phi.coefficients
            coefficients = self.operator.solve(rhs, values)
        else:
            full = (self.matrix + convection).tocsr()
            coefficients = solve_preconditioned(
                constrain_matrix(full, self.dofs),
                constrain_rhs(full, rhs, self.dofs, values),
                self.operator.factorization, rtol=SOLVER_RTOL, label='levelset', stats=self.stats,
            )

        if not np.all(np.isfinite(coefficients)):
            raise InvalidStateError("level-set step produced non-finite values")
        return ScalarField(self.space, coefficients)


def step_levelset_semi_implicit(phi: ScalarField, u: VectorField, tau: float,
                                params: LevelSetParams = None, source=None, boundary=None,
                                t_next: float = 0.0, bc_mode: str = None) -> ScalarField:
    """Single semi-implicit step; bc_mode defaults to dirichlet_exact when boundary data is given."""
    bc_mode = bc_mode or ('dirichlet_exact' if boundary is not None else 'natural')
    stepper = LevelSetStepper(phi.space, tau, params, 'semi_implicit', bc_mode)
    return stepper.step(phi, u, t_next, source, boundary)


def step_levelset_explicit(phi: ScalarField, u: VectorField, tau: float,
                           params: LevelSetParams = None, source=None, boundary=None,
                           t_next: float = 0.0, bc_mode: str = None) -> ScalarField:
    """Single explicit step; see step_levelset_semi_implicit."""
    bc_mode = bc_mode or ('dirichlet_exact' if boundary is not None else 'natural')
    stepper = LevelSetStepper(phi.space, tau, params, 'explicit', bc_mode)
    return stepper.step(phi, u, t_next, source, boundary)
