"""
Discrete energy of a flow state.

    E = int rho |u|^2 + 2 tau nu_bar int rho |eps(u)|^2
        + tau lambda_bar int rho (div u)^2 + (tau / lambda_eff) int p^2

Without forcing and with homogeneous boundary data this is non-increasing
from one step to the next.
"""

from typing import Dict

import numpy as np

from acflow.fem.fields import (
    divergence_at_quadrature, integrate, strain_at_quadrature, values_at_quadrature,
)
from acflow.scheme.parameters import SchemeParams
from acflow.scheme.state import FlowState

ENERGY_COMPONENTS = ('kinetic', 'strain', 'divergence', 'pressure')


def energy_components(state: FlowState, params: SchemeParams) -> Dict[str, float]:
    """The four terms of E plus their sum under 'total'."""
    space = state.u.space
    rho = values_at_quadrature(state.rho)
    u = values_at_quadrature(state.u)
    strain = strain_at_quadrature(state.u)
    div = divergence_at_quadrature(state.u)
    p = values_at_quadrature(state.p)

    components = {
        'kinetic': integrate(space, rho * np.sum(u ** 2, axis=-1)),
        'strain': 2.0 * params.tau * params.nu_bar * integrate(space, rho * np.sum(strain ** 2, axis=(-2, -1))),
        'divergence': params.tau * params.lambda_bar * integrate(space, rho * div ** 2),
        'pressure': params.tau / params.lambda_eff * integrate(state.p.space, p ** 2),
    }
    components['total'] = sum(components[name] for name in ENERGY_COMPONENTS)
    return components


def energy(state: FlowState, params: SchemeParams) -> float:
    return energy_components(state, params)['total']
