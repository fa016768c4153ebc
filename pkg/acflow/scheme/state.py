"""
Flow state snapshots.
"""

import logging
from dataclasses import dataclass

import numpy as np

from acflow.config.constants import MOMENTUM_CONSISTENCY_TOL
from acflow.core.exceptions import InvalidStateError
from acflow.fem.fields import ScalarField, VectorField, from_nodal, interpolate
from acflow.fem.spaces import TaylorHood
from acflow.levelset.materials import MaterialLaw, reconstruct_materials

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowState:
    """(phi, rho, eta, m, u, p) at time t; never mutated once built."""

    t: float
    phi: ScalarField
    rho: ScalarField
    eta: ScalarField
    m: VectorField
    u: VectorField
    p: ScalarField
    step: int = 0

    def momentum_consistency(self) -> float:
        """max |rho u - m| / max |m| over the nodal values (absolute when m = 0)."""
        rho = self.rho.coefficients
        product = np.concatenate([rho, rho]) * self.u.coefficients
        diff = np.abs(product - self.m.coefficients).max()
        scale = np.abs(self.m.coefficients).max()
        return float(diff / scale) if scale > 0.0 else float(diff)

    def check(self, tolerance: float = MOMENTUM_CONSISTENCY_TOL):
        """Raise InvalidStateError when rho <= 0 somewhere or rho u != m."""
        for name in ('phi', 'rho', 'eta', 'm', 'u', 'p'):
            if not np.all(np.isfinite(getattr(self, name).coefficients)):
                raise InvalidStateError(f"non-finite values in {name} at t={self.t:.6g}")
        if self.rho.min() <= 0.0:
            raise InvalidStateError(f"nonpositive density {self.rho.min():.3e} at t={self.t:.6g}")
        consistency = self.momentum_consistency()
        if consistency > tolerance:
            raise InvalidStateError(f"rho u differs from m by {consistency:.3e} (relative) at t={self.t:.6g}")

    def summary(self):
        return {
            't': self.t,
            'step': self.step,
            'phi_min': self.phi.min(),
            'phi_max': self.phi.max(),
            'rho_min': self.rho.min(),
            'rho_max': self.rho.max(),
        }


def nodal_momentum(rho: ScalarField, u: VectorField) -> VectorField:
    """rho_i * u_i at every dof (both components)."""
    return from_nodal(u.space, rho.coefficients[:, None] * u.nodal)


def initial_state(spaces: TaylorHood, phi0, u0, p0, law: MaterialLaw, t0: float = 0.0) -> FlowState:
    """Interpolate the initial fields and reconstruct the materials.

    Args:
        spaces: Taylor-Hood pair
        phi0, p0: f(points, t) or constants
        u0: f(points, t) returning (n, 2), or None for a fluid at rest
        law: material law

    Returns:
        FlowState at t0 with m = rho u nodally
    """
    phi = interpolate(spaces.velocity, phi0, t0)
    if u0 is None:
        u = VectorField(spaces.velocity, np.zeros(2 * spaces.velocity.n_dofs))
    else:
        u = interpolate(spaces.velocity, u0, t0)
        if not isinstance(u, VectorField):
            raise InvalidStateError("initial velocity must be vector valued")
    p = interpolate(spaces.pressure, p0, t0)
    rho, eta = reconstruct_materials(phi, law)
    state = FlowState(t=float(t0), phi=phi, rho=rho, eta=eta, m=nodal_momentum(rho, u), u=u, p=p)
    state.check()
    return state
