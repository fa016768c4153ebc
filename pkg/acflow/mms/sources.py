"""
Source terms synthesized from the exact fields of a manufactured case.

Momentum (conservative residual, consistent with the discrete d_t m + (u . grad) m):
    f = rho d_t u + rho (u . grad) u + u (d_t rho + div(rho u)) - 2 div(eta eps(u)) + grad p
with
    -2 div(eta eps(u)) = -eta (lap u + grad div u) - 2 eps(u) grad eta.
When the exact density is transported without a source the u(...) term vanishes.

Level set:
    f_phi = d_t phi + u . grad phi
"""

import numpy as np

from acflow.mms.cases import ManufacturedCase


def _density_terms(case: ManufacturedCase, points, t):
    phi = case.phi(points, t)
    rho = case.law.density(phi)
    d_rho = case.law.d_density()
    grad_rho = d_rho * case.grad_phi(points, t)
    drho_dt = d_rho * case.dphi_dt(points, t)
    return rho, grad_rho, drho_dt


def viscous_term(case: ManufacturedCase, points, t):
    """-2 div(eta eps(u)) from the analytic closures."""
    rho, grad_rho, _ = _density_terms(case, points, t)
    eta = case.law.viscosity(rho)
    grad_eta = case.law.d_viscosity(rho)[..., None] * grad_rho

    grad_u = case.grad_u(points, t)
    hess_u = case.hess_u(points, t)
    strain = 0.5 * (grad_u + np.swapaxes(grad_u, -1, -2))
    laplacian = hess_u[..., 0, 0] + hess_u[..., 1, 1]
    grad_div = np.stack([hess_u[..., 0, a, 0] + hess_u[..., 1, a, 1] for a in range(2)], axis=-1)
    return -eta[..., None] * (laplacian + grad_div) - 2.0 * np.einsum('...ab,...b->...a', strain, grad_eta)


def source_momentum(case: ManufacturedCase, points, t):
    """Momentum source at points (..., 2), returns (..., 2)."""
    points = np.asarray(points, dtype=float)
    if case.momentum_source is not None:
        return np.asarray(case.momentum_source(points, t), dtype=float)

    rho, grad_rho, drho_dt = _density_terms(case, points, t)
    u = case.u(points, t)
    grad_u = case.grad_u(points, t)
    div_u = grad_u[..., 0, 0] + grad_u[..., 1, 1]

    inertia = rho[..., None] * (case.du_dt(points, t) + np.einsum('...ab,...b->...a', grad_u, u))
    mass_residual = drho_dt + np.einsum('...b,...b->...', u, grad_rho) + rho * div_u
    return inertia + u * mass_residual[..., None] + viscous_term(case, points, t) + case.grad_p(points, t)


def source_levelset(case: ManufacturedCase, points, t):
    """Level-set source at points (..., 2), returns (...)."""
    points = np.asarray(points, dtype=float)
    if case.levelset_source is not None:
        return np.asarray(case.levelset_source(points, t), dtype=float)
    return case.dphi_dt(points, t) + np.einsum('...b,...b->...', case.u(points, t), case.grad_phi(points, t))


def momentum_source_function(case: ManufacturedCase):
    """f(points, t) closure for the solver."""
    return lambda points, t: source_momentum(case, points, t)


def levelset_source_function(case: ManufacturedCase):
    return lambda points, t: source_levelset(case, points, t)
