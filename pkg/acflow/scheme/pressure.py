"""
Velocity recovery and pressure update.
"""

import logging
from typing import Optional

import numpy as np

from acflow.config.constants import PROJECTION_RTOL
from acflow.core.exceptions import NonpositiveDensityError
from acflow.fem import assembly
from acflow.fem.fields import ScalarField, VectorField, from_nodal
from acflow.fem.solvers import SolverStats, factorize
from acflow.fem.spaces import TaylorHood
from acflow.scheme.parameters import SchemeParams

logger = logging.getLogger(__name__)


def recover_velocity(m: VectorField, rho: ScalarField) -> VectorField:
    """u_i = m_i / rho_i at every dof, both components."""
    density = rho.coefficients
    if np.any(density <= 0.0):
        bad = int(np.argmin(density))
        raise NonpositiveDensityError(f"cannot recover velocity: rho={density[bad]:.3e} at dof {bad}")
    return from_nodal(m.space, m.nodal / density[:, None])


class PressureUpdater:
    """p^{n+1} = p^n - lambda_eff * P(div u^{n+1}) with P the L2 projection onto P1.

    The pressure mass matrix is factored once per run.
    """

    def __init__(self, spaces: TaylorHood, params: SchemeParams, stats: Optional[SolverStats] = None,
                 solver: str = 'direct'):
        self.spaces = spaces
        self.params = params
        self.mass = assembly.assemble_form(spaces.pressure, assembly.mass())
        self.divergence = assembly.assemble_form(spaces.pressure, assembly.divergence(),
                                                 trial_space=spaces.velocity)
        self.factorization = factorize(self.mass, method=solver, rtol=PROJECTION_RTOL,
                                       label='pressure_mass', stats=stats)
        self.last_identity_residual = 0.0

    def project_divergence(self, u: VectorField) -> ScalarField:
        return ScalarField(self.spaces.pressure, self.factorization.solve(self.divergence @ u.coefficients))

    def update(self, p: ScalarField, u: VectorField) -> ScalarField:
        projected = self.project_divergence(u)
        p_next = p.coefficients - self.params.lambda_eff * projected.coefficients
        identity = p_next - p.coefficients + self.params.lambda_eff * projected.coefficients
        scale = max(1.0, float(np.abs(p_next).max(initial=0.0)))
        self.last_identity_residual = float(np.abs(identity).max(initial=0.0)) / scale
        return ScalarField(self.spaces.pressure, p_next)


def update_pressure(p: ScalarField, u: VectorField, params: SchemeParams,
                    spaces: Optional[TaylorHood] = None) -> ScalarField:
    """One-off pressure update; runs should reuse a PressureUpdater."""
    spaces = spaces or TaylorHood(u.space.mesh)
    return PressureUpdater(spaces, params).update(p, u)
