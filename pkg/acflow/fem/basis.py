"""
Lagrange P1/P2 shape functions on triangles in barycentric form.

Local node order: vertices 0, 1, 2, then (P2) the midpoints of the local
edges (0,1), (1,2), (2,0). Gradients are returned as coefficients on the
barycentric gradients, so grad phi_a = sum_k coef[a, k] * grad lambda_k.
"""

import numpy as np

from acflow.core.exceptions import InvalidParameterError
from acflow.mesh.models import LOCAL_EDGES

SUPPORTED_DEGREES = (1, 2)


def n_local_dofs(degree: int) -> int:
    if degree == 1:
        return 3
    if degree == 2:
        return 6
    raise InvalidParameterError(f"unsupported element degree {degree}")


def basis_values(degree: int, bary: np.ndarray) -> np.ndarray:
    """Shape function values, (n_points, n_local)."""
    bary = np.atleast_2d(bary)
    if degree == 1:
        return bary.copy()
    n_local_dofs(degree)
    vertex = bary * (2.0 * bary - 1.0)
    edge = 4.0 * bary[:, LOCAL_EDGES[:, 0]] * bary[:, LOCAL_EDGES[:, 1]]
    return np.hstack([vertex, edge])


def basis_bary_gradients(degree: int, bary: np.ndarray) -> np.ndarray:
    """Gradient coefficients on grad lambda_k, (n_points, n_local, 3)."""
    bary = np.atleast_2d(bary)
    n_points = bary.shape[0]
    if degree == 1:
        return np.broadcast_to(np.eye(3), (n_points, 3, 3)).copy()

    coef = np.zeros((n_points, n_local_dofs(degree), 3))
    for i in range(3):
        coef[:, i, i] = 4.0 * bary[:, i] - 1.0
    for e, (i, j) in enumerate(LOCAL_EDGES):
        coef[:, 3 + e, i] = 4.0 * bary[:, j]
        coef[:, 3 + e, j] = 4.0 * bary[:, i]
    return coef


def barycentric_gradients(corners: np.ndarray):
    """Physical gradients of the barycentric coordinates.

    Args:
        corners: (m, 3, 2) counterclockwise vertex coordinates

    Returns:
        (grad_lambda (m, 3, 2), area (m,))
    """
    d1 = corners[:, 1] - corners[:, 0]
    d2 = corners[:, 2] - corners[:, 0]
    det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    grad = np.empty((corners.shape[0], 3, 2))
    # rows of the inverse Jacobian
    grad[:, 1, 0] = d2[:, 1] / det
    grad[:, 1, 1] = -d2[:, 0] / det
    grad[:, 2, 0] = -d1[:, 1] / det
    grad[:, 2, 1] = d1[:, 0] / det
    grad[:, 0] = -(grad[:, 1] + grad[:, 2])
    return grad, 0.5 * det


def reference_nodes(degree: int) -> np.ndarray:
    """Barycentric coordinates of the local nodes, (n_local, 3)."""
    vertices = np.eye(3)
    if degree == 1:
        return vertices
    n_local_dofs(degree)
    mids = 0.5 * (vertices[LOCAL_EDGES[:, 0]] + vertices[LOCAL_EDGES[:, 1]])
    return np.vstack([vertices, mids])
