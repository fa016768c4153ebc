"""
Per-step monitors and the error report written to the time series.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List

import numpy as np

from acflow.config.constants import OVERSHOOT_WARNING
from acflow.diagnostics.energy import energy
from acflow.diagnostics.norms import error_norm
from acflow.fem.fields import divergence_at_quadrature, integrate
from acflow.levelset.transport import overshoot
from acflow.mms.cases import ManufacturedCase
from acflow.scheme.parameters import SchemeParams
from acflow.scheme.state import FlowState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Monitors:
    div_norm: float
    overshoot: float
    rho_min: float
    rho_max: float


def divergence_norm(state: FlowState) -> float:
    """||div u||_{L2}."""
    div = divergence_at_quadrature(state.u)
    return float(np.sqrt(max(0.0, integrate(state.u.space, div ** 2))))


def monitors(state: FlowState) -> Monitors:
    result = Monitors(
        div_norm=divergence_norm(state),
        overshoot=overshoot(state.phi),
        rho_min=state.rho.min(),
        rho_max=state.rho.max(),
    )
    if result.overshoot > OVERSHOOT_WARNING:
        logger.warning(f"t={state.t:.6g}: level-set overshoot {result.overshoot:.3e}")
    return result


@dataclass(frozen=True)
class ErrorReport:
    """Errors and monitors at one time level.

    err_phi is measured in the case's level-set norm (L2 or L1). Names listed in
    `absolute` hold plain error norms because the exact norm vanished.
    """

    step: int
    t: float
    err_u_L2: float
    err_p_L2: float
    err_phi: float
    err_rho_L2: float
    div_norm: float
    overshoot: float
    energy: float
    rho_min: float
    rho_max: float
    absolute: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return asdict(self)


def error_report(state: FlowState, case: ManufacturedCase, params: SchemeParams) -> ErrorReport:
    """Compare a state with the exact fields of a manufactured case at state.t."""
    t = state.t
    errors = {
        'err_u_L2': error_norm(state.u, case.u, t, 'L2'),
        'err_p_L2': error_norm(state.p, case.p, t, 'L2'),
        'err_phi': error_norm(state.phi, case.phi, t, case.phi_norm),
        'err_rho_L2': error_norm(state.rho, case.rho, t, 'L2'),
    }
    watched = monitors(state)
    report = ErrorReport(
        step=state.step, t=t,
        **{name: value for name, (value, _) in errors.items()},
        div_norm=watched.div_norm, overshoot=watched.overshoot,
        energy=energy(state, params),
        rho_min=watched.rho_min, rho_max=watched.rho_max,
        absolute=[name for name, (_, absolute) in errors.items() if absolute],
    )
    logger.debug(f"Step {state.step}: err_u={report.err_u_L2:.3e}, err_p={report.err_p_L2:.3e}, "
                 f"err_phi={report.err_phi:.3e}, div={report.div_norm:.3e}, energy={report.energy:.6e}")
    return report
