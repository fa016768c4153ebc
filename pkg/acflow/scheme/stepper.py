"""
Time marching.

One step runs level set -> materials -> momentum -> velocity -> pressure. The
constant parts of the three linear systems are factored when the FlowSolver is
built and reused for every step of the run.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from acflow.config.constants import (
    MOMENTUM_CONSISTENCY_TOL, OVERSHOOT_WARNING, PRESSURE_IDENTITY_TOL,
)
from acflow.core.exceptions import AcflowError, InvalidParameterError, InvalidStateError, StepError
from acflow.fem.fields import call_pointwise
from acflow.fem.solvers import SolverStats
from acflow.fem.spaces import TaylorHood
from acflow.levelset.materials import MaterialLaw, reconstruct_materials
from acflow.levelset.transport import BC_MODES, LevelSetStepper, overshoot
from acflow.mms.cases import ManufacturedCase
from acflow.mms.sources import levelset_source_function, momentum_source_function
from acflow.scheme.momentum import MomentumOperator
from acflow.scheme.parameters import SchemeParams
from acflow.scheme.pressure import PressureUpdater, recover_velocity
from acflow.scheme.state import FlowState

logger = logging.getLogger(__name__)

STAGES = ('levelset', 'materials', 'momentum', 'velocity', 'pressure')


@dataclass(frozen=True)
class FlowProblem:
    """Sources and boundary data of a run.

    Attributes:
        momentum_source: f(points, t) -> (n, 2), or None for f = 0
        levelset_source: f_phi(points, t) -> (n,), or None
        momentum_boundary: m on the boundary, g(points, t) -> (n, 2); None means m = 0
        levelset_boundary: phi on the boundary for the dirichlet_exact mode
        levelset_bc_mode: 'natural' or 'dirichlet_exact'
    """

    momentum_source: Optional[Callable] = None
    levelset_source: Optional[Callable] = None
    momentum_boundary: Optional[Callable] = None
    levelset_boundary: Optional[Callable] = None
    levelset_bc_mode: str = 'natural'

    @classmethod
    def from_case(cls, case: ManufacturedCase, levelset_bc_mode: str = 'dirichlet_exact') -> "FlowProblem":
        """Sources synthesized from the exact fields, exact rho u and phi on the boundary."""
        return cls(
            momentum_source=momentum_source_function(case),
            levelset_source=levelset_source_function(case),
            momentum_boundary=case.momentum,
            levelset_boundary=case.phi,
            levelset_bc_mode=levelset_bc_mode,
        )


class FlowSolver:
    """Advances FlowState snapshots with fixed spaces, parameters and material law."""

    def __init__(self, spaces: TaylorHood, params: SchemeParams, law: MaterialLaw,
                 problem: Optional[FlowProblem] = None, solver: str = 'direct',
                 check_invariants: bool = True):
        self.spaces = spaces
        self.params = params
        self.law = law
        self.problem = problem or FlowProblem()
        if self.problem.levelset_bc_mode not in BC_MODES:
            raise InvalidParameterError(f"unknown level-set boundary mode '{self.problem.levelset_bc_mode}'")
        self.check_invariants = check_invariants
        self.stats = SolverStats()

        self.levelset = LevelSetStepper(spaces.velocity, params.tau, params.levelset,
                                        variant=params.variant, bc_mode=self.problem.levelset_bc_mode,
                                        stats=self.stats, solver=solver)
        self.momentum = MomentumOperator(spaces, params, stats=self.stats, solver=solver)
        self.pressure = PressureUpdater(spaces, params, stats=self.stats, solver=solver)
        logger.info(f"Flow solver ready: {spaces.n_dofs} unknowns, "
                    f"{self.stats.total_factorizations} factorizations")

    def momentum_boundary_values(self, t: float):
        if self.problem.momentum_boundary is None:
            return 0.0
        dofs = self.momentum.dofs[:self.momentum.dofs.size // 2]
        points = self.spaces.velocity.dof_coordinates[dofs]
        values = call_pointwise(self.problem.momentum_boundary, points, t, what="momentum boundary data")
        values = np.asarray(values, dtype=float).reshape(-1, 2)
        return np.concatenate([values[:, 0], values[:, 1]])

    def advance(self, state: FlowState) -> FlowState:
        """One step from t^n to t^n + tau.

        Raises:
            StepError: any stage failure, with the step index and stage name
        """
        step_index = state.step + 1
        t_next = state.t + self.params.tau
        stage = STAGES[0]
        problem = self.problem
        try:
            phi = self.levelset.step(state.phi, state.u, t_next,
                                     problem.levelset_source, problem.levelset_boundary)

            stage = 'materials'
            rho, eta = reconstruct_materials(phi, self.law)

            stage = 'momentum'
            m = self.momentum.solve(state, rho, eta, problem.momentum_source,
                                    self.momentum_boundary_values(t_next), t_next)

            stage = 'velocity'
            u = recover_velocity(m, rho)

            stage = 'pressure'
            p = self.pressure.update(state.p, u)
            next_state = FlowState(t=t_next, phi=phi, rho=rho, eta=eta, m=m, u=u, p=p, step=step_index)
            if self.check_invariants:
                self._check(next_state)
        except StepError:
            raise
        except AcflowError as e:
            logger.error(f"Step {step_index} failed in stage '{stage}': {e}")
            raise StepError(step_index, stage, e) from e

        excess = overshoot(phi)
        if excess > OVERSHOOT_WARNING:
            logger.warning(f"Step {step_index}: level-set overshoot {excess:.3e}")
        logger.debug(f"Step {step_index}: t={t_next:.6g}, overshoot={excess:.3e}, "
                     f"pressure identity={self.pressure.last_identity_residual:.3e}")
        return next_state

    def _check(self, state: FlowState):
        identity = self.pressure.last_identity_residual
        if identity > PRESSURE_IDENTITY_TOL:
            raise InvalidStateError(f"pressure update identity violated by {identity:.3e}")
        state.check(MOMENTUM_CONSISTENCY_TOL)

    def run(self, state: FlowState, n_steps: int,
            callback: Optional[Callable[[FlowState], None]] = None) -> FlowState:
        """Advance n_steps times, calling callback(state) after each step."""
        if n_steps < 0:
            raise InvalidParameterError(f"n_steps must be nonnegative, got {n_steps}")
        for _ in range(n_steps):
            state = self.advance(state)
            if callback is not None:
                callback(state)
        logger.info(f"Ran {n_steps} steps to t={state.t:.6g}; solver stats {self.stats.to_dict()}")
        return state


def advance(state: FlowState, params: SchemeParams, law: MaterialLaw,
            problem: Optional[FlowProblem] = None, spaces: Optional[TaylorHood] = None) -> FlowState:
    """Single step without operator reuse; runs should build one FlowSolver."""
    spaces = spaces or TaylorHood(state.u.space.mesh)
    return FlowSolver(spaces, params, law, problem).advance(state)
