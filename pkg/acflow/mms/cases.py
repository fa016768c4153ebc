"""
Manufactured solutions.

Each case carries vectorized closures f(points, t) for the exact fields and their
derivatives; points have shape (..., 2). Derivative conventions:
    grad_u[..., a, b]     = d u_a / d x_b
    hess_u[..., a, b, c]  = d^2 u_a / d x_b d x_c

Disk cases (unit disk, t in [0, 1]):
    u = s(t) (-sin^2 x sin y cos y, sin x cos x sin^2 y), s = 3/4 + sin(t)/4
    p = sin x sin y sin t
    phi = 1/2 + (r/2) cos(theta - sin(t/2)) = 1/2 + (x cos a + y sin a)/2, a = sin(t/2)
Writing A = sin 2x, B = sin 2y, cA = cos 2x, cB = cos 2y:
    u_1 = -s (1 - cA) B / 4,  u_2 = s A (1 - cB) / 4
which is what the closures below differentiate. The velocity is divergence free.

Slab case ([0, 1] x [-1, 1]): the indicator phi = 1{y < t/2 - 1/2} is carried by
u = (0, 1/2), rho = 1 + phi, eta = 1 and p = x^2 y^3 cos t, so the momentum
source reduces to grad p and no level-set source is needed. On the interface
the indicator is 0 (strict inequality).
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from acflow.core.exceptions import InvalidParameterError
from acflow.levelset.materials import MaterialLaw
from acflow.mesh.models import Disk, Rectangle, Shape

logger = logging.getLogger(__name__)

PointFunction = Callable[[np.ndarray, float], np.ndarray]


@dataclass(frozen=True, eq=False)
class ManufacturedCase:
    """Exact fields of one manufactured test with analytic derivatives."""

    name: str
    shape: Shape
    law: MaterialLaw
    u: PointFunction
    grad_u: PointFunction
    hess_u: PointFunction
    du_dt: PointFunction
    p: PointFunction
    grad_p: PointFunction
    phi: PointFunction
    grad_phi: PointFunction
    dphi_dt: PointFunction
    smooth: bool = True
    phi_norm: str = 'L2'
    t_final: float = 1.0
    description: str = ""
    # Hand-derived sources replace the synthesized ones (discontinuous cases)
    momentum_source: Optional[PointFunction] = field(default=None)
    levelset_source: Optional[PointFunction] = field(default=None)
    # Distance to the set where the exact fields are not smooth
    singular_distance: Optional[PointFunction] = field(default=None)

    def rho(self, points, t):
        return self.law.density(self.phi(points, t))

    def eta(self, points, t):
        return self.law.viscosity(self.rho(points, t))

    def momentum(self, points, t):
        return self.rho(points, t)[..., None] * self.u(points, t)

    def to_dict(self) -> Dict:
        shape = self.shape
        if isinstance(shape, Disk):
            domain = {'shape': 'disk', 'radius': shape.radius}
        else:
            domain = {'shape': 'rectangle', 'x_range': list(shape.x_range), 'y_range': list(shape.y_range)}
        return {
            'name': self.name,
            'domain': domain,
            'law': self.law.to_dict(),
            'smooth': self.smooth,
            'phi_norm': self.phi_norm,
            'description': self.description,
        }


def _xy(points):
    points = np.asarray(points, dtype=float)
    return points[..., 0], points[..., 1]


# Disk cases
def _speed(t):
    return 0.75 + 0.25 * np.sin(t)


def _speed_rate(t):
    return 0.25 * np.cos(t)


def _trig(points):
    x, y = _xy(points)
    return np.sin(2 * x), np.sin(2 * y), np.cos(2 * x), np.cos(2 * y)


def disk_velocity(points, t):
    a, b, ca, cb = _trig(points)
    s = _speed(t)
    return np.stack([-s * (1 - ca) * b / 4, s * a * (1 - cb) / 4], axis=-1)


def disk_velocity_rate(points, t):
    return _speed_rate(t) / _speed(t) * disk_velocity(points, t)


def disk_velocity_gradient(points, t):
    a, b, ca, cb = _trig(points)
    s = _speed(t)
    row1 = np.stack([-s * a * b / 2, -s * (1 - ca) * cb / 2], axis=-1)
    row2 = np.stack([s * ca * (1 - cb) / 2, s * a * b / 2], axis=-1)
    return np.stack([row1, row2], axis=-2)


def disk_velocity_hessian(points, t):
    a, b, ca, cb = _trig(points)
    s = _speed(t)
    h1 = np.stack([
        np.stack([-s * ca * b, -s * a * cb], axis=-1),
        np.stack([-s * a * cb, s * (1 - ca) * b], axis=-1),
    ], axis=-2)
    h2 = np.stack([
        np.stack([-s * a * (1 - cb), s * ca * b], axis=-1),
        np.stack([s * ca * b, s * a * cb], axis=-1),
    ], axis=-2)
    return np.stack([h1, h2], axis=-3)


def disk_pressure(points, t):
    x, y = _xy(points)
    return np.sin(x) * np.sin(y) * np.sin(t)


def disk_pressure_gradient(points, t):
    x, y = _xy(points)
    return np.stack([np.cos(x) * np.sin(y) * np.sin(t), np.sin(x) * np.cos(y) * np.sin(t)], axis=-1)


def disk_level_set(points, t):
    x, y = _xy(points)
    angle = np.sin(0.5 * t)
    return 0.5 + 0.5 * (x * np.cos(angle) + y * np.sin(angle))


def disk_level_set_gradient(points, t):
    x, _ = _xy(points)
    angle = np.sin(0.5 * t)
    ones = np.ones_like(x)
    return np.stack([0.5 * np.cos(angle) * ones, 0.5 * np.sin(angle) * ones], axis=-1)


def disk_level_set_rate(points, t):
    x, y = _xy(points)
    angle = np.sin(0.5 * t)
    rate = 0.5 * np.cos(0.5 * t)
    return 0.5 * rate * (-x * np.sin(angle) + y * np.cos(angle))


def _disk_case(name: str, law: MaterialLaw, description: str) -> ManufacturedCase:
    return ManufacturedCase(
        name=name, shape=Disk(1.0), law=law,
        u=disk_velocity, grad_u=disk_velocity_gradient, hess_u=disk_velocity_hessian,
        du_dt=disk_velocity_rate,
        p=disk_pressure, grad_p=disk_pressure_gradient,
        phi=disk_level_set, grad_phi=disk_level_set_gradient, dphi_dt=disk_level_set_rate,
        description=description,
    )


# Slab case
# the interface rides the uniform upward flow at speed 1/2, so phi needs no source
def _slab_interface(t):
    return 0.5 * t - 0.5


def slab_velocity(points, t):
    x, _ = _xy(points)
    return np.stack([np.zeros_like(x), 0.5 * np.ones_like(x)], axis=-1)


def _zeros_vector_gradient(points, t):
    x, _ = _xy(points)
    return np.zeros(x.shape + (2, 2))


def _zeros_vector_hessian(points, t):
    x, _ = _xy(points)
    return np.zeros(x.shape + (2, 2, 2))


def _zeros_vector(points, t):
    x, _ = _xy(points)
    return np.zeros(x.shape + (2,))


def _zeros_scalar(points, t):
    x, _ = _xy(points)
    return np.zeros_like(x)


def slab_pressure(points, t):
    x, y = _xy(points)
    return x ** 2 * y ** 3 * np.cos(t)


def slab_pressure_gradient(points, t):
    x, y = _xy(points)
    return np.stack([2 * x * y ** 3 * np.cos(t), 3 * x ** 2 * y ** 2 * np.cos(t)], axis=-1)


def slab_indicator(points, t):
    _, y = _xy(points)
    return (y < _slab_interface(t)).astype(float)


def slab_interface_distance(points, t):
    _, y = _xy(points)
    return np.abs(y - _slab_interface(t))


# Quiescent case
def quiescent_level_set(points, t):
    return 0.5 * np.ones_like(_xy(points)[0])


_CASES = {
    'disk_linear_eta_10': lambda: _disk_case(
        'disk_linear_eta_10', MaterialLaw.linear(1.0, 100.0, 1.0, 10.0),
        "Unit disk, rho in [1, 100], linear eta in [1, 10]"),
    'disk_linear_eta_inv100': lambda: _disk_case(
        'disk_linear_eta_inv100', MaterialLaw.linear(1.0, 100.0, 0.01, 1.0),
        "Unit disk, rho in [1, 100], linear eta in [0.01, 1]"),
    'disk_reciprocal_eta': lambda: _disk_case(
        'disk_reciprocal_eta', MaterialLaw.reciprocal(1.0, 100.0),
        "Unit disk, rho in [1, 100], eta = 1/rho"),
    'slab_discontinuous_2d': lambda: ManufacturedCase(
        name='slab_discontinuous_2d', shape=Rectangle((0.0, 1.0), (-1.0, 1.0)),
        law=MaterialLaw.linear(1.0, 2.0, 1.0, 1.0),
        u=slab_velocity, grad_u=_zeros_vector_gradient, hess_u=_zeros_vector_hessian,
        du_dt=_zeros_vector,
        p=slab_pressure, grad_p=slab_pressure_gradient,
        phi=slab_indicator, grad_phi=_zeros_vector, dphi_dt=_zeros_scalar,
        smooth=False, phi_norm='L1',
        description="Indicator slab carried upward at speed 1/2, rho = 1 + phi, eta = 1",
        momentum_source=slab_pressure_gradient, levelset_source=_zeros_scalar,
        singular_distance=slab_interface_distance,
    ),
    'quiescent_square': lambda: ManufacturedCase(
        name='quiescent_square', shape=Rectangle((0.0, 1.0), (0.0, 1.0)),
        law=MaterialLaw.linear(1.0, 2.0, 1.0, 1.0),
        u=_zeros_vector, grad_u=_zeros_vector_gradient, hess_u=_zeros_vector_hessian,
        du_dt=_zeros_vector,
        p=_zeros_scalar, grad_p=_zeros_vector,
        phi=quiescent_level_set, grad_phi=_zeros_vector, dphi_dt=_zeros_scalar,
        description="Fluid at rest, phi = 1/2 on the unit square",
    ),
}


def builtin_cases() -> List[ManufacturedCase]:
    return [factory() for factory in _CASES.values()]


def case_names() -> List[str]:
    return list(_CASES)


def get_case(name: str) -> ManufacturedCase:
    if name not in _CASES:
        raise InvalidParameterError(f"unknown case '{name}', expected one of {case_names()}")
    return _CASES[name]()
