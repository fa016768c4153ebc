"""
Finite-difference oracle for manufactured cases.

The strong operators are applied to the exact value closures (u, p, phi and the
material law) with nested central differences, independently of the analytic
derivative closures, and compared against the synthesized sources. The analytic
derivative closures are checked against central differences as well.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from acflow.core.exceptions import InvalidParameterError
from acflow.mesh.models import Disk, Rectangle
from acflow.mms.cases import ManufacturedCase
from acflow.mms.sources import source_levelset, source_momentum

logger = logging.getLogger(__name__)

SPACE_STEP = 2.5e-5
TIME_STEP = 1e-5
DERIVATIVE_STEP = 1e-6
ORACLE_TOLERANCE = 1e-6
DEFAULT_TIME = 0.37

_UNIT = np.eye(2)


@dataclass
class OracleReport:
    case: str
    t: float
    n_points: int
    momentum_deviation: float
    levelset_deviation: float
    derivative_deviations: Dict[str, float] = field(default_factory=dict)
    tolerance: float = ORACLE_TOLERANCE

    @property
    def max_deviation(self) -> float:
        return max([self.momentum_deviation, self.levelset_deviation, *self.derivative_deviations.values()])

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def to_dict(self):
        return {
            'case': self.case,
            't': self.t,
            'n_points': self.n_points,
            'momentum_deviation': self.momentum_deviation,
            'levelset_deviation': self.levelset_deviation,
            'derivative_deviations': dict(self.derivative_deviations),
            'tolerance': self.tolerance,
            'passed': self.passed,
        }


def relative_deviation(approx: np.ndarray, reference: np.ndarray) -> float:
    """max |approx - reference| / max |reference| (absolute when the reference vanishes)."""
    approx = np.asarray(approx, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if approx.ndim > 1:
        diff = np.linalg.norm((approx - reference).reshape(approx.shape[0], -1), axis=1)
        scale = np.linalg.norm(reference.reshape(reference.shape[0], -1), axis=1)
    else:
        diff = np.abs(approx - reference)
        scale = np.abs(reference)
    denominator = scale.max() if scale.size and scale.max() > 1e-14 else 1.0
    return float(diff.max() / denominator)


def sample_points(case: ManufacturedCase, n: int, seed: int = 0, t: float = DEFAULT_TIME,
                  margin: float = 1e-2) -> np.ndarray:
    """Seeded interior points, at least `margin` away from the boundary and from
    the singular set of non-smooth cases."""
    if n <= 0:
        raise InvalidParameterError(f"number of sample points must be positive, got {n}")
    rng = np.random.default_rng(seed)
    shape = case.shape
    accepted = []
    count = 0
    while count < n:
        batch = 2 * (n - count) + 16
        if isinstance(shape, Disk):
            radius = (shape.radius - margin) * np.sqrt(rng.uniform(0.0, 1.0, batch))
            theta = rng.uniform(0.0, 2.0 * np.pi, batch)
            points = np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])
        elif isinstance(shape, Rectangle):
            x = rng.uniform(shape.x_range[0] + margin, shape.x_range[1] - margin, batch)
            y = rng.uniform(shape.y_range[0] + margin, shape.y_range[1] - margin, batch)
            points = np.column_stack([x, y])
        else:
            raise InvalidParameterError(f"unsupported shape {shape!r}")
        if case.singular_distance is not None:
            points = points[case.singular_distance(points, t) > margin]
        accepted.append(points)
        count += len(points)
    return np.vstack(accepted)[:n]


# Central differences of closures f(points, t)
def _d_dx(function, points, t, axis: int, step: float):
    shift = step * _UNIT[axis]
    return (function(points + shift, t) - function(points - shift, t)) / (2.0 * step)


def _d_dt(function, points, t, step: float):
    return (function(points, t + step) - function(points, t - step)) / (2.0 * step)


def _fd_velocity_gradient(case, points, t, step):
    """[..., a, b] = d u_a / d x_b."""
    return np.stack([_d_dx(case.u, points, t, b, step) for b in range(2)], axis=-1)


def fd_momentum_source(case: ManufacturedCase, points, t,
                       space_step: float = SPACE_STEP, time_step: float = TIME_STEP) -> np.ndarray:
    """d_t(rho u) + div(rho u x u) - div(2 eta eps(u)) + grad p by finite differences."""
    def flux(x, s):
        rho = case.rho(x, s)
        u = case.u(x, s)
        grad = _fd_velocity_gradient(case, x, s, space_step)
        strain = 0.5 * (grad + np.swapaxes(grad, -1, -2))
        eta = case.law.viscosity(rho)
        # [..., a, b]: momentum flux minus viscous stress
        return rho[..., None, None] * u[..., :, None] * u[..., None, :] - 2.0 * eta[..., None, None] * strain

    divergence = sum(_d_dx(lambda x, s: flux(x, s)[..., :, b], points, t, b, space_step) for b in range(2))
    rate = _d_dt(case.momentum, points, t, time_step)
    grad_p = np.stack([_d_dx(case.p, points, t, b, space_step) for b in range(2)], axis=-1)
    return rate + divergence + grad_p


def fd_levelset_source(case: ManufacturedCase, points, t,
                       space_step: float = SPACE_STEP, time_step: float = TIME_STEP) -> np.ndarray:
    grad_phi = np.stack([_d_dx(case.phi, points, t, b, space_step) for b in range(2)], axis=-1)
    return _d_dt(case.phi, points, t, time_step) + np.einsum('...b,...b->...', case.u(points, t), grad_phi)


def derivative_deviations(case: ManufacturedCase, points, t, step: float = DERIVATIVE_STEP) -> Dict[str, float]:
    """Analytic derivative closures against central differences."""
    hess_fd = np.stack([_d_dx(case.grad_u, points, t, c, step) for c in range(2)], axis=-1)
    return {
        'grad_u': relative_deviation(case.grad_u(points, t), _fd_velocity_gradient(case, points, t, step)),
        'hess_u': relative_deviation(case.hess_u(points, t), hess_fd),
        'du_dt': relative_deviation(case.du_dt(points, t), _d_dt(case.u, points, t, step)),
        'grad_p': relative_deviation(case.grad_p(points, t),
                                     np.stack([_d_dx(case.p, points, t, b, step) for b in range(2)], axis=-1)),
        'grad_phi': relative_deviation(case.grad_phi(points, t),
                                       np.stack([_d_dx(case.phi, points, t, b, step) for b in range(2)], axis=-1)),
        'dphi_dt': relative_deviation(case.dphi_dt(points, t), _d_dt(case.phi, points, t, step)),
    }


def validate_case(case: ManufacturedCase, n_points: int = 1000, seed: int = 0,
                  t: Optional[float] = None, tolerance: float = ORACLE_TOLERANCE) -> OracleReport:
    """Compare analytic sources and derivatives with the finite-difference oracle."""
    t = DEFAULT_TIME if t is None else float(t)
    points = sample_points(case, n_points, seed=seed, t=t)

    momentum = relative_deviation(fd_momentum_source(case, points, t), source_momentum(case, points, t))
    levelset = relative_deviation(fd_levelset_source(case, points, t), source_levelset(case, points, t))
    report = OracleReport(
        case=case.name, t=t, n_points=len(points),
        momentum_deviation=momentum, levelset_deviation=levelset,
        derivative_deviations=derivative_deviations(case, points, t),
        tolerance=tolerance,
    )

    status = "passed" if report.passed else "FAILED"
    logger.info(f"Oracle {status} for '{case.name}': momentum {momentum:.2e}, level set {levelset:.2e}, "
                f"max derivative {max(report.derivative_deviations.values()):.2e}")
    return report
