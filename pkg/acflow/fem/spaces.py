"""
Lagrange finite element spaces on a Mesh.
Holds the dof map, boundary dofs and the per-element quadrature data every
assembly routine reads.
"""

import logging
from functools import cached_property
from typing import Optional

import numpy as np

from acflow.core.exceptions import InvalidParameterError, SpaceMismatchError
from acflow.fem.basis import (
    SUPPORTED_DEGREES, barycentric_gradients, basis_bary_gradients,
    basis_values, n_local_dofs,
)
from acflow.fem.quadrature import QUAD_BARY, QUAD_WEIGHTS, physical_points
from acflow.mesh.models import Mesh

logger = logging.getLogger(__name__)


class FeSpace:
    """Continuous Lagrange space of degree 1 or 2.

    Vector-valued fields on a space use the blocked layout: all x-components,
    then all y-components, so a vector field has 2 * n_dofs coefficients.
    """

    def __init__(self, mesh: Mesh, degree: int):
        if degree not in SUPPORTED_DEGREES:
            raise InvalidParameterError(f"degree must be one of {SUPPORTED_DEGREES}, got {degree}")
        self.mesh = mesh
        self.degree = degree
        self.n_local = n_local_dofs(degree)

    @cached_property
    def dof_map(self) -> np.ndarray:
        """(m, n_local) global dof of each local node."""
        if self.degree == 1:
            return self.mesh.triangles
        return np.hstack([self.mesh.triangles, self.mesh.n_vertices + self.mesh.triangle_edges])

    @property
    def n_dofs(self) -> int:
        if self.degree == 1:
            return self.mesh.n_vertices
        return self.mesh.n_vertices + self.mesh.n_edges

    @cached_property
    def dof_coordinates(self) -> np.ndarray:
        """(n_dofs, 2) location of each nodal dof."""
        if self.degree == 1:
            return self.mesh.vertices
        edges = self.mesh.edges
        mids = 0.5 * (self.mesh.vertices[edges[:, 0]] + self.mesh.vertices[edges[:, 1]])
        return np.vstack([self.mesh.vertices, mids])

    def boundary_dofs(self, tag: Optional[int] = None) -> np.ndarray:
        """Sorted boundary dofs, optionally restricted to the edges carrying `tag`."""
        if tag is None:
            mask = np.ones(len(self.mesh.boundary_tags), dtype=bool)
        else:
            mask = self.mesh.boundary_tags == tag
        dofs = [self.mesh.boundary_edges[mask].reshape(-1)]
        if self.degree == 2:
            dofs.append(self.mesh.n_vertices + self.mesh.boundary_edge_ids[mask])
        return np.unique(np.concatenate(dofs))

    def vector_dofs(self, dofs: np.ndarray) -> np.ndarray:
        """Blocked-layout indices of both components of the given scalar dofs."""
        dofs = np.asarray(dofs, dtype=np.int64)
        return np.concatenate([dofs, dofs + self.n_dofs])

    # Element data, computed once per space
    @cached_property
    def _geometry(self):
        corners = self.mesh.vertices[self.mesh.triangles]
        grad_lambda, area = barycentric_gradients(corners)
        return corners, grad_lambda, area

    @property
    def areas(self) -> np.ndarray:
        return self._geometry[2]

    @property
    def grad_lambda(self) -> np.ndarray:
        """(m, 3, 2) gradients of the barycentric coordinates."""
        return self._geometry[1]

    @cached_property
    def jxw(self) -> np.ndarray:
        """(m, n_quad) quadrature weight times element area."""
        return self.areas[:, None] * QUAD_WEIGHTS[None, :]

    @cached_property
    def quadrature_points(self) -> np.ndarray:
        """(m, n_quad, 2) physical quadrature points."""
        return physical_points(self._geometry[0])

    @cached_property
    def values(self) -> np.ndarray:
        """(n_quad, n_local) shape function values at the quadrature points."""
        return basis_values(self.degree, QUAD_BARY)

    @cached_property
    def gradients(self) -> np.ndarray:
        """(m, n_quad, n_local, 2) physical shape function gradients."""
        coef = basis_bary_gradients(self.degree, QUAD_BARY)
        return np.einsum('qak,mkd->mqad', coef, self._geometry[1])

    def check_same_mesh(self, other: "FeSpace"):
        if other.mesh is not self.mesh:
            raise SpaceMismatchError(
                f"spaces live on different meshes ({self.mesh.name} vs {other.mesh.name})"
            )

    def __repr__(self):
        return f"<FeSpace(P{self.degree}, dofs={self.n_dofs}, mesh='{self.mesh.name}')>"


class TaylorHood:
    """P2 velocity/level-set space paired with the P1 pressure space."""

    def __init__(self, mesh: Mesh):
        self.mesh = mesh
        self.velocity = FeSpace(mesh, 2)
        self.pressure = FeSpace(mesh, 1)
        logger.info(
            f"Taylor-Hood spaces on {mesh!r}: {self.velocity.n_dofs} P2 dofs, "
            f"{self.pressure.n_dofs} P1 dofs"
        )

    @property
    def n_dofs(self) -> int:
        """Total unknowns of one step: two velocity components plus pressure."""
        return 2 * self.velocity.n_dofs + self.pressure.n_dofs
