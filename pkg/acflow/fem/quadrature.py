"""
Triangle quadrature.
Seven-point symmetric rule, exact for polynomials of total degree 5. Every form in
acflow is integrated with this single rule.
"""

import numpy as np

from acflow.config.constants import QUADRATURE_DEGREE

_SQRT15 = np.sqrt(15.0)

_A1 = (6.0 - _SQRT15) / 21.0
_A2 = (6.0 + _SQRT15) / 21.0
_W1 = (155.0 - _SQRT15) / 1200.0
_W2 = (155.0 + _SQRT15) / 1200.0

# Barycentric coordinates (lambda_0, lambda_1, lambda_2) of the points
QUAD_BARY = np.array([
    [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    [_A1, _A1, 1.0 - 2.0 * _A1],
    [_A1, 1.0 - 2.0 * _A1, _A1],
    [1.0 - 2.0 * _A1, _A1, _A1],
    [_A2, _A2, 1.0 - 2.0 * _A2],
    [_A2, 1.0 - 2.0 * _A2, _A2],
    [1.0 - 2.0 * _A2, _A2, _A2],
])

# Weights relative to the triangle area (they sum to one)
QUAD_WEIGHTS = np.array([0.225, _W1, _W1, _W1, _W2, _W2, _W2])

N_QUAD = QUAD_WEIGHTS.shape[0]
DEGREE = QUADRATURE_DEGREE


def physical_points(corners: np.ndarray) -> np.ndarray:
    """Map the rule to triangles.

    Args:
        corners: (m, 3, 2) vertex coordinates

    Returns:
        (m, N_QUAD, 2) quadrature points
    """
    return np.einsum('qk,mkd->mqd', QUAD_BARY, corners)


def integrate_on_triangle(function, corners: np.ndarray) -> float:
    """Integrate function(points (n, 2)) over a single triangle (3, 2)."""
    corners = np.asarray(corners, dtype=float)
    d1 = corners[1] - corners[0]
    d2 = corners[2] - corners[0]
    area = 0.5 * abs(d1[0] * d2[1] - d1[1] * d2[0])
    points = QUAD_BARY @ corners
    return float(area * np.dot(QUAD_WEIGHTS, function(points)))
