"""
Material laws: density and dynamic viscosity as functions of the level set.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from acflow.core.exceptions import InvalidParameterError, MaterialLawError
from acflow.fem.fields import ScalarField

logger = logging.getLogger(__name__)

ETA_LAWS = ('linear', 'reciprocal', 'user')


@dataclass(frozen=True)
class MaterialLaw:
    """rho = rho_min + (rho_max - rho_min) * phi, eta = eta_law(rho).

    Attributes:
        rho_min, rho_max: densities at phi = 0 and phi = 1
        eta_law: 'linear' (eta_1 at phi = 0, eta_2 at phi = 1), 'reciprocal' (1/rho)
            or 'user' (eta_function of rho with Lipschitz bound `lipschitz`)
    """

    rho_min: float = 1.0
    rho_max: float = 1.0
    eta_law: str = 'linear'
    eta_1: float = 1.0
    eta_2: float = 1.0
    eta_function: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    eta_derivative: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    lipschitz: Optional[float] = None

    def __post_init__(self):
        if not self.rho_min > 0.0:
            raise InvalidParameterError(f"rho_min must be positive, got {self.rho_min}")
        if not self.rho_max >= self.rho_min:
            raise InvalidParameterError(f"rho_max ({self.rho_max}) must be >= rho_min ({self.rho_min})")
        if self.eta_law not in ETA_LAWS:
            raise InvalidParameterError(f"unknown eta law '{self.eta_law}', expected one of {ETA_LAWS}")
        if self.eta_law == 'user' and self.eta_function is None:
            raise InvalidParameterError("user eta law needs an eta_function")

    @classmethod
    def linear(cls, rho_min: float, rho_max: float, eta_1: float, eta_2: float) -> "MaterialLaw":
        return cls(rho_min, rho_max, 'linear', eta_1, eta_2)

    @classmethod
    def reciprocal(cls, rho_min: float, rho_max: float) -> "MaterialLaw":
        return cls(rho_min, rho_max, 'reciprocal')

    def density(self, phi):
        return self.rho_min + (self.rho_max - self.rho_min) * np.asarray(phi, dtype=float)

    def d_density(self) -> float:
        """d rho / d phi."""
        return self.rho_max - self.rho_min

    def viscosity(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.eta_law == 'linear':
            if self.rho_max == self.rho_min:
                return np.full_like(rho, self.eta_1)
            phi = (rho - self.rho_min) / (self.rho_max - self.rho_min)
            return self.eta_1 + (self.eta_2 - self.eta_1) * phi
        if self.eta_law == 'reciprocal':
            return 1.0 / rho
        return np.asarray(self.eta_function(rho), dtype=float)

    def d_viscosity(self, rho):
        """d eta / d rho."""
        rho = np.asarray(rho, dtype=float)
        if self.eta_law == 'linear':
            if self.rho_max == self.rho_min:
                return np.zeros_like(rho)
            return np.full_like(rho, (self.eta_2 - self.eta_1) / (self.rho_max - self.rho_min))
        if self.eta_law == 'reciprocal':
            return -1.0 / rho ** 2
        if self.eta_derivative is None:
            raise InvalidParameterError("user eta law has no eta_derivative")
        return np.asarray(self.eta_derivative(rho), dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rho_min': self.rho_min,
            'rho_max': self.rho_max,
            'eta_law': self.eta_law,
            'eta_1': self.eta_1,
            'eta_2': self.eta_2,
            'lipschitz': self.lipschitz,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MaterialLaw":
        return cls(
            rho_min=data.get('rho_min', 1.0),
            rho_max=data.get('rho_max', 1.0),
            eta_law=data.get('eta_law', 'linear'),
            eta_1=data.get('eta_1', 1.0),
            eta_2=data.get('eta_2', 1.0),
            lipschitz=data.get('lipschitz'),
        )


def reconstruct_materials(phi: ScalarField, law: MaterialLaw) -> Tuple[ScalarField, ScalarField]:
    """Nodal density and viscosity from the level set. phi is not clipped."""
    rho = law.density(phi.coefficients)
    if law.eta_law == 'reciprocal' and np.any(rho <= 0.0):
        bad = int(np.argmin(rho))
        raise MaterialLawError(f"reciprocal viscosity law met rho={rho[bad]:.3e} at dof {bad}")
    with np.errstate(divide='ignore', invalid='ignore'):
        eta = law.viscosity(rho)
    if not np.all(np.isfinite(eta)):
        raise MaterialLawError("viscosity reconstruction produced non-finite values")
    return ScalarField(phi.space, rho), ScalarField(phi.space, eta)
