"""
Finite element fields: scalar and blocked two-component coefficient vectors
bound to an FeSpace, with interpolation, point evaluation and quadrature-point
evaluation of values and gradients.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from acflow.core.exceptions import (
    AcflowError, InvalidParameterError, PointNotFoundError, SourceEvaluationError,
    SpaceMismatchError,
)
from acflow.fem.basis import basis_bary_gradients, basis_values
from acflow.fem.spaces import FeSpace

logger = logging.getLogger(__name__)

# Barycentric slack when locating a point that sits on an edge
LOCATE_TOLERANCE = 1e-10


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ScalarField:
    space: FeSpace
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = _freeze(self.coefficients).reshape(-1)
        if coefficients.shape[0] != self.space.n_dofs:
            raise SpaceMismatchError(
                f"scalar field needs {self.space.n_dofs} coefficients, got {coefficients.shape[0]}"
            )
        object.__setattr__(self, 'coefficients', coefficients)

    @property
    def n_components(self) -> int:
        return 1

    def with_coefficients(self, coefficients: np.ndarray) -> "ScalarField":
        return ScalarField(self.space, coefficients)

    def min(self) -> float:
        return float(self.coefficients.min())

    def max(self) -> float:
        return float(self.coefficients.max())


@dataclass(frozen=True, eq=False)
class VectorField:
    """Two-component field, blocked layout [x-components, y-components]."""

    space: FeSpace
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = _freeze(self.coefficients).reshape(-1)
        if coefficients.shape[0] != 2 * self.space.n_dofs:
            raise SpaceMismatchError(
                f"vector field needs {2 * self.space.n_dofs} coefficients, got {coefficients.shape[0]}"
            )
        object.__setattr__(self, 'coefficients', coefficients)

    @property
    def n_components(self) -> int:
        return 2

    def component(self, index: int) -> ScalarField:
        n = self.space.n_dofs
        return ScalarField(self.space, self.coefficients[index * n:(index + 1) * n])

    @property
    def nodal(self) -> np.ndarray:
        """(n_dofs, 2) view of the coefficients."""
        return self.coefficients.reshape(2, -1).T

    def with_coefficients(self, coefficients: np.ndarray) -> "VectorField":
        return VectorField(self.space, coefficients)


Field = Union[ScalarField, VectorField]


def zero_field(space: FeSpace, vector: bool = False) -> Field:
    if vector:
        return VectorField(space, np.zeros(2 * space.n_dofs))
    return ScalarField(space, np.zeros(space.n_dofs))


def from_nodal(space: FeSpace, nodal: np.ndarray) -> VectorField:
    """Build a vector field from (n_dofs, 2) nodal values."""
    nodal = np.asarray(nodal, dtype=float).reshape(-1, 2)
    return VectorField(space, np.concatenate([nodal[:, 0], nodal[:, 1]]))


def call_pointwise(function: Callable, points: np.ndarray, t: float, what: str = "function") -> np.ndarray:
    """Evaluate function(points, t); non-acflow failures become SourceEvaluationError."""
    try:
        values = function(points, t)
    except AcflowError:
        raise
    except Exception as e:
        raise SourceEvaluationError(f"{what} failed at t={t}: {e}") from e
    values = np.asarray(values, dtype=float)
    if values.ndim == 0:
        values = np.full(points.shape[:-1], float(values))
    elif values.shape[:points.ndim - 1] != points.shape[:-1]:
        values = np.broadcast_to(values, points.shape[:-1] + values.shape[-1:]).copy()
    if not np.all(np.isfinite(values)):
        raise SourceEvaluationError(f"{what} returned non-finite values at t={t}")
    return values


def interpolate(space: FeSpace, function, t: float = 0.0) -> Field:
    """Nodal interpolation of function(points (n, 2), t).

    A function returning (n,) values gives a ScalarField, (n, 2) a VectorField.
    Plain numbers interpolate as constants.
    """
    if np.isscalar(function):
        return ScalarField(space, np.full(space.n_dofs, float(function)))

    values = call_pointwise(function, space.dof_coordinates, t, what="interpolant")
    if values.ndim == 1:
        return ScalarField(space, values)
    if values.ndim == 2 and values.shape[1] == 2:
        return from_nodal(space, values)
    raise InvalidParameterError(f"interpolant returned values of shape {values.shape}")


# Quadrature-point evaluation
def _local(field: Field, component: int = 0) -> np.ndarray:
    n = field.space.n_dofs
    return field.coefficients[component * n:(component + 1) * n][field.space.dof_map]


def values_at_quadrature(field: Field) -> np.ndarray:
    """(m, n_quad) for scalar fields, (m, n_quad, 2) for vector fields."""
    basis = field.space.values
    if field.n_components == 1:
        return np.einsum('qa,ma->mq', basis, _local(field))
    return np.stack([np.einsum('qa,ma->mq', basis, _local(field, c)) for c in range(2)], axis=-1)


def evaluate_gradient(field: Field) -> np.ndarray:
    """Gradients at quadrature points.

    Returns:
        (m, n_quad, 2) for scalar fields; (m, n_quad, 2, 2) for vector fields
        with [..., a, b] = d u_a / d x_b
    """
    grads = field.space.gradients
    if field.n_components == 1:
        return np.einsum('mqad,ma->mqd', grads, _local(field))
    return np.stack([np.einsum('mqad,ma->mqd', grads, _local(field, c)) for c in range(2)], axis=-2)


def strain_at_quadrature(field: VectorField) -> np.ndarray:
    """Symmetric gradient eps(u) at quadrature points, (m, n_quad, 2, 2)."""
    grad = evaluate_gradient(field)
    return 0.5 * (grad + np.swapaxes(grad, -1, -2))


def divergence_at_quadrature(field: VectorField) -> np.ndarray:
    grad = evaluate_gradient(field)
    return grad[..., 0, 0] + grad[..., 1, 1]


def integrate(space: FeSpace, values) -> float:
    """Domain integral of values given at quadrature points (m, n_quad) or of a
    callable f(points, t=0)."""
    if callable(values):
        values = call_pointwise(values, space.quadrature_points, 0.0, what="integrand")
    values = np.asarray(values, dtype=float)
    if values.shape != space.jxw.shape:
        raise SpaceMismatchError(f"integrand shape {values.shape} does not match quadrature {space.jxw.shape}")
    return float(np.sum(values * space.jxw))


# Point evaluation
def locate(space: FeSpace, point) -> tuple:
    """Containing triangle and barycentric coordinates of a point."""
    point = np.asarray(point, dtype=float).reshape(2)
    mesh = space.mesh
    corners = mesh.vertices[mesh.triangles]
    d1 = corners[:, 1] - corners[:, 0]
    d2 = corners[:, 2] - corners[:, 0]
    det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    rel = point - corners[:, 0]
    l1 = (rel[:, 0] * d2[:, 1] - rel[:, 1] * d2[:, 0]) / det
    l2 = (d1[:, 0] * rel[:, 1] - d1[:, 1] * rel[:, 0]) / det
    bary = np.column_stack([1.0 - l1 - l2, l1, l2])
    worst = bary.min(axis=1)
    cell = int(np.argmax(worst))
    if worst[cell] < -LOCATE_TOLERANCE:
        raise PointNotFoundError(f"point ({point[0]:.6g}, {point[1]:.6g}) lies outside mesh '{mesh.name}'")
    return cell, bary[cell]


def evaluate(field: Field, point):
    """Value of the field at a point; a float or a (2,) array."""
    cell, bary = locate(field.space, point)
    phi = basis_values(field.space.degree, bary)[0]
    dofs = field.space.dof_map[cell]
    if field.n_components == 1:
        return float(phi @ field.coefficients[dofs])
    n = field.space.n_dofs
    return np.array([phi @ field.coefficients[dofs + c * n] for c in range(2)])


def evaluate_points(field: Field, points) -> np.ndarray:
    """Evaluate at each row of points (k, 2)."""
    return np.array([evaluate(field, p) for p in np.atleast_2d(points)])


def evaluate_point_gradient(field: ScalarField, point) -> np.ndarray:
    cell, bary = locate(field.space, point)
    coef = basis_bary_gradients(field.space.degree, bary)[0]
    grad_lambda = field.space.grad_lambda[cell]
    grads = coef @ grad_lambda
    return field.coefficients[field.space.dof_map[cell]] @ grads
