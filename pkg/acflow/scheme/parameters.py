"""
Scheme parameters.

    nu_bar     = 1.1 * max(eta0 / rho0)
    rho_under  = min(rho0)
    lambda_eff = max(1, nu_bar * rho_under) * lambda_user
    lambda_bar = 1.1 * lambda_eff / rho_under

The rescaling of lambda is applied before lambda_bar is formed.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict

import numpy as np

from acflow.config.constants import DEFAULT_LAMBDA, SAFETY_FACTOR
from acflow.core.exceptions import InvalidParameterError, InvalidStateError
from acflow.fem.fields import ScalarField
from acflow.levelset.transport import LevelSetParams

logger = logging.getLogger(__name__)

VARIANTS = ('semi_implicit', 'explicit')
GRAD_DIV_CHOICES = ('lambda_bar', 'lambda_eff')


@dataclass(frozen=True)
class SchemeParams:
    """Time step, relaxation parameters and variant flags of one run.

    Attributes:
        grad_div_implicit_coef: which of lambda_bar / lambda_eff multiplies the
            implicit grad-div term
        single_diffusion_factor: explicit variant only; viscous terms carry
            factor 1 instead of 2
    """

    tau: float
    lambda_user: float
    lambda_eff: float
    nu_bar: float
    rho_under: float
    lambda_bar: float
    variant: str = 'semi_implicit'
    grad_div_implicit_coef: str = 'lambda_bar'
    single_diffusion_factor: bool = False
    levelset: LevelSetParams = field(default_factory=LevelSetParams)

    def __post_init__(self):
        if not self.tau > 0.0:
            raise InvalidParameterError(f"tau must be positive, got {self.tau}")
        if self.variant not in VARIANTS:
            raise InvalidParameterError(f"unknown variant '{self.variant}', expected one of {VARIANTS}")
        if self.grad_div_implicit_coef not in GRAD_DIV_CHOICES:
            raise InvalidParameterError(f"grad_div_implicit_coef must be one of {GRAD_DIV_CHOICES}")
        for name in ('nu_bar', 'rho_under', 'lambda_bar', 'lambda_eff'):
            if not getattr(self, name) > 0.0:
                raise InvalidParameterError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def gamma_grad_div(self) -> float:
        return self.lambda_bar if self.grad_div_implicit_coef == 'lambda_bar' else self.lambda_eff

    @property
    def diffusion_factor(self) -> float:
        if self.variant == 'explicit' and self.single_diffusion_factor:
            return 1.0
        return 2.0

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['gamma_grad_div'] = self.gamma_grad_div
        return data


def init_parameters(rho0: ScalarField, eta0: ScalarField, lambda_user: float = DEFAULT_LAMBDA,
                    variant: str = 'semi_implicit', tau: float = 1.0,
                    grad_div_implicit_coef: str = 'lambda_bar', single_diffusion_factor: bool = False,
                    levelset: LevelSetParams = None) -> SchemeParams:
    """Compute nu_bar, rho_under, lambda_eff and lambda_bar from the initial materials.

    Args:
        rho0: initial density (P2)
        eta0: initial dynamic viscosity (P2)
        lambda_user: pressure relaxation before rescaling
        variant: 'semi_implicit' or 'explicit'
        tau: time step

    Returns:
        SchemeParams
    """
    rho = np.asarray(rho0.coefficients)
    eta = np.asarray(eta0.coefficients)
    if np.any(~np.isfinite(rho)) or np.any(rho <= 0.0):
        raise InvalidStateError(f"initial density must be positive at every dof (min {np.nanmin(rho):.3e})")
    if not lambda_user > 0.0:
        raise InvalidParameterError(f"lambda_user must be positive, got {lambda_user}")

    nu_bar = SAFETY_FACTOR * float(np.max(eta / rho))
    rho_under = float(np.min(rho))
    lambda_eff = max(1.0, nu_bar * rho_under) * float(lambda_user)
    lambda_bar = SAFETY_FACTOR * lambda_eff / rho_under

    params = SchemeParams(
        tau=float(tau), lambda_user=float(lambda_user), lambda_eff=lambda_eff,
        nu_bar=nu_bar, rho_under=rho_under, lambda_bar=lambda_bar,
        variant=variant, grad_div_implicit_coef=grad_div_implicit_coef,
        single_diffusion_factor=single_diffusion_factor,
        levelset=levelset or LevelSetParams(),
    )
    logger.info(
        f"Scheme parameters: nu_bar={nu_bar:.6g}, rho_under={rho_under:.6g}, "
        f"lambda_eff={lambda_eff:.6g}, lambda_bar={lambda_bar:.6g}, tau={tau:.6g}, variant={variant}"
    )
    return params
