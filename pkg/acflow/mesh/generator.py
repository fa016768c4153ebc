"""
Mesh generation for acflow.
Structured triangulations of rectangles, ring-seeded Delaunay triangulations of disks,
and uniform refinement with boundary projection.
"""

import logging
import math

import numpy as np
from scipy.spatial import Delaunay

from acflow.config.constants import DISK_SPACING_FACTOR
from acflow.core.exceptions import InvalidParameterError, MeshGenerationError
from acflow.mesh.models import (
    BOTTOM, DISK_BOUNDARY, LEFT, RIGHT, TOP,
    Disk, Mesh, Rectangle, Shape,
)

logger = logging.getLogger(__name__)


def _cells_along(length: float, h_target: float) -> int:
    # guard against 1/0.1 = 10.000000000000002
    return max(1, int(math.ceil(length / h_target - 1e-9)))


def generate_rectangle_mesh(shape: Rectangle, h_target: float) -> Mesh:
    """Split an nx-by-ny grid of cells along their diagonals."""
    (x0, x1), (y0, y1) = shape.x_range, shape.y_range
    if not (x1 > x0 and y1 > y0):
        raise MeshGenerationError(f"degenerate rectangle {shape.x_range} x {shape.y_range}")

    nx = _cells_along(x1 - x0, h_target)
    ny = _cells_along(y1 - y0, h_target)
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    grid_x, grid_y = np.meshgrid(xs, ys)
    vertices = np.column_stack([grid_x.ravel(), grid_y.ravel()])

    def vid(i, j):
        return j * (nx + 1) + i

    i, j = np.meshgrid(np.arange(nx), np.arange(ny))
    i, j = i.ravel(), j.ravel()
    v00, v10, v01, v11 = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
    lower = np.column_stack([v00, v10, v11])
    upper = np.column_stack([v00, v11, v01])
    triangles = np.stack([lower, upper], axis=1).reshape(-1, 3)

    ix = np.arange(nx)
    jy = np.arange(ny)
    edges = [
        np.column_stack([vid(ix, 0), vid(ix + 1, 0)]),
        np.column_stack([vid(nx, jy), vid(nx, jy + 1)]),
        np.column_stack([vid(ix + 1, ny), vid(ix, ny)]),
        np.column_stack([vid(0, jy + 1), vid(0, jy)]),
    ]
    tags = [np.full(nx, BOTTOM), np.full(ny, RIGHT), np.full(nx, TOP), np.full(ny, LEFT)]

    return Mesh(vertices, triangles, np.vstack(edges), np.concatenate(tags),
                name=f"rectangle_{nx}x{ny}")


def _ring_size(radius: float, spacing: float) -> int:
    # multiple of four so the axis points (+-R, 0), (0, +-R) are vertices
    return 4 * max(2, int(math.ceil(2.0 * math.pi * radius / (4.0 * spacing) - 1e-9)))


def generate_disk_mesh(shape: Disk, h_target: float, seed: int = 0) -> Mesh:
    """Delaunay triangulation of concentric rings of points.

    The outer ring lies exactly on the circle; interior rings get a seeded random
    angular offset, so the mesh is deterministic per (radius, h_target, seed).
    """
    radius = float(shape.radius)
    if not radius > 0.0:
        raise MeshGenerationError(f"disk radius must be positive, got {radius}")

    spacing = DISK_SPACING_FACTOR * h_target
    n_rings = _cells_along(radius, spacing)
    rng = np.random.default_rng(seed)

    points = [np.zeros((1, 2))]
    for k in range(1, n_rings + 1):
        r = radius if k == n_rings else radius * k / n_rings
        n_k = _ring_size(r, spacing)
        offset = 0.0 if k == n_rings else rng.uniform(0.0, 2.0 * np.pi / n_k)
        theta = offset + 2.0 * np.pi * np.arange(n_k) / n_k
        points.append(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))
    vertices = np.vstack(points)

    try:
        delaunay = Delaunay(vertices)
    except Exception as e:
        raise MeshGenerationError(f"Delaunay triangulation failed: {e}") from e
    if len(delaunay.coplanar):
        raise MeshGenerationError(f"{len(delaunay.coplanar)} points were left out of the triangulation")

    triangles = np.array(delaunay.simplices, dtype=np.int64)
    corners = vertices[triangles]
    d1 = corners[:, 1] - corners[:, 0]
    d2 = corners[:, 2] - corners[:, 0]
    area = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    flip = area < 0.0
    triangles[flip] = triangles[flip][:, [0, 2, 1]]
    if np.min(np.abs(area)) <= 1e-12 * h_target ** 2:
        raise MeshGenerationError("degenerate triangle produced by the triangulation")

    pairs = np.sort(triangles[:, [[0, 1], [1, 2], [2, 0]]].reshape(-1, 2), axis=1)
    edges, counts = np.unique(pairs, axis=0, return_counts=True)
    boundary = edges[counts == 1]

    return Mesh(vertices, triangles, boundary, np.full(len(boundary), DISK_BOUNDARY),
                name=f"disk_r{radius:g}_h{h_target:g}")


def generate_mesh(shape: Shape, h_target: float, seed: int = 0) -> Mesh:
    """Generate a conforming mesh of a disk or rectangle.

    Args:
        shape: Disk or Rectangle
        h_target: target mesh size; the longest edge stays below 1.5 * h_target
        seed: seeds the interior ring offsets of disk meshes (rectangles are structured)

    Returns:
        Mesh
    """
    if not (isinstance(h_target, (int, float, np.floating)) and h_target > 0.0):
        raise InvalidParameterError(f"h_target must be positive, got {h_target}")

    if isinstance(shape, Disk):
        mesh = generate_disk_mesh(shape, float(h_target), seed)
    elif isinstance(shape, Rectangle):
        mesh = generate_rectangle_mesh(shape, float(h_target))
    else:
        raise InvalidParameterError(f"unsupported shape: {shape!r}")

    logger.info(f"Generated {mesh!r} for h_target={h_target}")
    return mesh


def refine_mesh(mesh: Mesh, shape: Shape = None) -> Mesh:
    """Split every triangle into four through its edge midpoints.

    Midpoints of boundary edges are projected radially onto the circle when
    `shape` is a Disk.
    """
    n = mesh.n_vertices
    edges = mesh.edges
    midpoints = 0.5 * (mesh.vertices[edges[:, 0]] + mesh.vertices[edges[:, 1]])

    if isinstance(shape, Disk):
        ids = mesh.boundary_edge_ids
        norms = np.linalg.norm(midpoints[ids], axis=1)
        midpoints[ids] = midpoints[ids] * (shape.radius / norms)[:, None]

    tri = mesh.triangles
    te = mesh.triangle_edges + n
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    m_ab, m_bc, m_ca = te[:, 0], te[:, 1], te[:, 2]
    children = np.stack([
        np.column_stack([a, m_ab, m_ca]),
        np.column_stack([m_ab, b, m_bc]),
        np.column_stack([m_ca, m_bc, c]),
        np.column_stack([m_ab, m_bc, m_ca]),
    ], axis=1).reshape(-1, 3)

    mids = mesh.boundary_edge_ids + n
    first = np.column_stack([mesh.boundary_edges[:, 0], mids])
    second = np.column_stack([mids, mesh.boundary_edges[:, 1]])
    boundary = np.stack([first, second], axis=1).reshape(-1, 2)
    tags = np.repeat(mesh.boundary_tags, 2)

    refined = Mesh(np.vstack([mesh.vertices, midpoints]), children, boundary, tags,
                   name=f"{mesh.name}_refined")
    logger.info(f"Refined {mesh!r} -> {refined!r}")
    return refined
