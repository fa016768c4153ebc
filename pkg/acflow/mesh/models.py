"""
Mesh data models for acflow.
Conforming triangulations with boundary tags and local mesh-size metadata.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Optional, Tuple, Union

import numpy as np

from acflow.core.exceptions import MeshValidationError

# Boundary tags
DISK_BOUNDARY = 1
BOTTOM, RIGHT, TOP, LEFT = 1, 2, 3, 4

# Local edge numbering shared with the P2 dof layout: edge j joins these local vertices
LOCAL_EDGES = np.array([[0, 1], [1, 2], [2, 0]])


@dataclass(frozen=True)
class Disk:
    """Disk centered at the origin."""

    radius: float = 1.0

    @property
    def area(self) -> float:
        return float(np.pi * self.radius ** 2)


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle [x0, x1] x [y0, y1]."""

    x_range: Tuple[float, float] = (0.0, 1.0)
    y_range: Tuple[float, float] = (0.0, 1.0)

    @property
    def area(self) -> float:
        return float((self.x_range[1] - self.x_range[0]) * (self.y_range[1] - self.y_range[0]))


Shape = Union[Disk, Rectangle]


def domain_area(shape: Shape) -> float:
    """Exact area of the continuous domain."""
    return shape.area


def polygon_area(mesh: "Mesh") -> float:
    """Sum of triangle areas."""
    return mesh.total_area


@dataclass(eq=False)
class Mesh:
    """Immutable triangular mesh.

    Attributes:
        vertices: (n, 2) vertex coordinates
        triangles: (m, 3) counterclockwise vertex indices
        boundary_edges: (b, 2) vertex pairs on the boundary
        boundary_tags: (b,) integer tag of each boundary edge
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    boundary_tags: np.ndarray
    name: str = field(default="mesh")

    def __post_init__(self):
        self.vertices = np.array(self.vertices, dtype=float).reshape(-1, 2)
        self.triangles = np.array(self.triangles, dtype=np.int64).reshape(-1, 3)
        self.boundary_edges = np.array(self.boundary_edges, dtype=np.int64).reshape(-1, 2)
        self.boundary_tags = np.array(self.boundary_tags, dtype=np.int64).reshape(-1)
        for array in (self.vertices, self.triangles, self.boundary_edges, self.boundary_tags):
            array.setflags(write=False)
        self.validate()

    # Sizes
    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_triangles(self) -> int:
        return int(self.triangles.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    # Geometry
    @cached_property
    def signed_areas(self) -> np.ndarray:
        p0 = self.vertices[self.triangles[:, 0]]
        p1 = self.vertices[self.triangles[:, 1]]
        p2 = self.vertices[self.triangles[:, 2]]
        d1 = p1 - p0
        d2 = p2 - p0
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    @cached_property
    def h_local(self) -> np.ndarray:
        """Longest edge of each triangle."""
        corners = self.vertices[self.triangles]
        lengths = np.linalg.norm(corners[:, LOCAL_EDGES[:, 1]] - corners[:, LOCAL_EDGES[:, 0]], axis=2)
        return lengths.max(axis=1)

    @property
    def h_global(self) -> float:
        return float(self.h_local.max())

    @property
    def total_area(self) -> float:
        return float(self.signed_areas.sum())

    # Topology
    @cached_property
    def _edge_data(self):
        pairs = np.sort(self.triangles[:, LOCAL_EDGES].reshape(-1, 2), axis=1)
        edges, inverse, counts = np.unique(pairs, axis=0, return_inverse=True, return_counts=True)
        return edges, np.asarray(inverse).reshape(-1, 3), counts

    @property
    def edges(self) -> np.ndarray:
        """(E, 2) unique edges with sorted vertex pairs."""
        return self._edge_data[0]

    @property
    def triangle_edges(self) -> np.ndarray:
        """(m, 3) edge index of local edge j of each triangle."""
        return self._edge_data[1]

    @property
    def edge_triangle_counts(self) -> np.ndarray:
        return self._edge_data[2]

    @cached_property
    def boundary_edge_ids(self) -> np.ndarray:
        """Index into `edges` for each entry of `boundary_edges`."""
        lookup = {(int(a), int(b)): k for k, (a, b) in enumerate(self.edges)}
        ids = [lookup[(int(min(a, b)), int(max(a, b)))] for a, b in self.boundary_edges]
        return np.array(ids, dtype=np.int64)

    def boundary_vertices(self, tag: Optional[int] = None) -> np.ndarray:
        """Sorted vertex indices on the boundary, optionally restricted to one tag."""
        selected = self.boundary_edges if tag is None else self.boundary_edges[self.boundary_tags == tag]
        return np.unique(selected.reshape(-1))

    @property
    def tags(self) -> Tuple[int, ...]:
        return tuple(int(t) for t in np.unique(self.boundary_tags))

    def validate(self):
        """Check the connectivity invariants; raises MeshValidationError."""
        n = self.n_vertices
        if not np.all(np.isfinite(self.vertices)):
            raise MeshValidationError("vertex coordinates must be finite")
        if self.n_triangles == 0:
            raise MeshValidationError("mesh has no triangles")

        bad = np.nonzero((self.triangles < 0) | (self.triangles >= n))[0]
        if bad.size:
            raise MeshValidationError(f"triangle {int(bad[0])} references a nonexistent vertex")
        tri = self.triangles
        if np.any((tri[:, 0] == tri[:, 1]) | (tri[:, 1] == tri[:, 2]) | (tri[:, 0] == tri[:, 2])):
            raise MeshValidationError("triangle with repeated vertex")

        nonpositive = np.nonzero(self.signed_areas <= 0.0)[0]
        if nonpositive.size:
            raise MeshValidationError(
                f"triangle {int(nonpositive[0])} has nonpositive signed area {self.signed_areas[nonpositive[0]]:.3e}"
            )

        counts = self.edge_triangle_counts
        if np.any(counts > 2):
            raise MeshValidationError("edge shared by more than two triangles")

        bnd = self.boundary_edges
        if bnd.shape[0] != self.boundary_tags.shape[0]:
            raise MeshValidationError("every boundary edge needs exactly one tag")
        if np.any((bnd < 0) | (bnd >= n)):
            raise MeshValidationError("boundary edge references a nonexistent vertex")
        sorted_bnd = np.sort(bnd, axis=1)
        unique_bnd = np.unique(sorted_bnd, axis=0)
        if unique_bnd.shape[0] != sorted_bnd.shape[0]:
            raise MeshValidationError("duplicated boundary edge")

        expected = {tuple(e) for e in self.edges[counts == 1].tolist()}
        declared = {tuple(e) for e in sorted_bnd.tolist()}
        if declared - expected:
            raise MeshValidationError("boundary edge does not belong to exactly one triangle")
        if expected - declared:
            raise MeshValidationError("untagged boundary edge")

    def summary(self) -> Dict[str, float]:
        return {
            'vertices': self.n_vertices,
            'triangles': self.n_triangles,
            'edges': self.n_edges,
            'h_global': self.h_global,
            'area': self.total_area,
        }

    def __repr__(self):
        return f"<Mesh(name='{self.name}', vertices={self.n_vertices}, triangles={self.n_triangles}, h={self.h_global:.4g})>"
