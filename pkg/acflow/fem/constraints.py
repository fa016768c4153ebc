"""
Dirichlet constraints by symmetric elimination.
Constrained rows and columns are zeroed with a unit diagonal, and the right-hand
side is lifted by the prescribed values so the solution matches them exactly.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse

from acflow.config.constants import SOLVER_RTOL
from acflow.core.exceptions import InvalidParameterError
from acflow.fem.solvers import Factorization, SolverStats, factorize

logger = logging.getLogger(__name__)


def _check_dofs(dofs, n: int) -> np.ndarray:
    dofs = np.asarray(dofs, dtype=np.int64).reshape(-1)
    if dofs.size and (dofs.min() < 0 or dofs.max() >= n):
        raise InvalidParameterError(f"constrained dof out of range [0, {n})")
    if np.unique(dofs).size != dofs.size:
        raise InvalidParameterError("constrained dofs must be unique")
    return dofs


def _values(values, dofs: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim == 0:
        return np.full(dofs.size, float(values))
    values = values.reshape(-1)
    if values.size != dofs.size:
        raise InvalidParameterError(f"{values.size} values given for {dofs.size} constrained dofs")
    return values


def constrain_matrix(matrix, dofs) -> sparse.csr_matrix:
    """P A P + diag(mask) where P zeroes the constrained dofs."""
    matrix = sparse.csr_matrix(matrix)
    n = matrix.shape[0]
    dofs = _check_dofs(dofs, n)
    mask = np.zeros(n)
    mask[dofs] = 1.0
    keep = sparse.diags(1.0 - mask)
    constrained = (keep @ matrix @ keep + sparse.diags(mask)).tocsr()
    constrained.sort_indices()
    return constrained


def constrain_rhs(matrix, rhs: np.ndarray, dofs, values) -> np.ndarray:
    """b - A g on free rows, prescribed values on constrained rows."""
    rhs = np.asarray(rhs, dtype=float)
    dofs = _check_dofs(dofs, rhs.shape[0])
    lift = np.zeros_like(rhs)
    lift[dofs] = _values(values, dofs)
    adjusted = rhs - matrix @ lift
    adjusted[dofs] = lift[dofs]
    return adjusted


@dataclass
class ConstrainedSystem:
    matrix: sparse.csr_matrix
    rhs: np.ndarray
    dofs: np.ndarray
    values: np.ndarray


def apply_dirichlet(matrix, rhs: np.ndarray, boundary_dofs, values) -> ConstrainedSystem:
    """Constrain `boundary_dofs` of the system A x = b to `values`.

    Args:
        matrix: square sparse matrix
        rhs: load vector
        boundary_dofs: indices to constrain
        values: one value per dof or a single number

    Returns:
        ConstrainedSystem with the eliminated matrix and adjusted rhs
    """
    matrix = sparse.csr_matrix(matrix)
    dofs = _check_dofs(boundary_dofs, matrix.shape[0])
    values = _values(values, dofs)
    return ConstrainedSystem(
        matrix=constrain_matrix(matrix, dofs),
        rhs=constrain_rhs(matrix, rhs, dofs, values),
        dofs=dofs,
        values=values,
    )


class DirichletOperator:
    """A matrix with a fixed constrained dof set, factored once.

    Right-hand sides and boundary values may change between solves; the
    unconstrained matrix is kept for the lifting.
    """

    def __init__(self, matrix, dofs, method: str = 'direct', rtol: float = SOLVER_RTOL,
                 label: str = 'system', stats: Optional[SolverStats] = None):
        self.matrix = sparse.csr_matrix(matrix)
        self.dofs = _check_dofs(dofs, self.matrix.shape[0])
        self.constrained = constrain_matrix(self.matrix, self.dofs)
        self.factorization: Factorization = factorize(self.constrained, method=method, rtol=rtol,
                                                      label=label, stats=stats)

    def rhs(self, rhs: np.ndarray, values) -> np.ndarray:
        return constrain_rhs(self.matrix, rhs, self.dofs, values)

    def solve(self, rhs: np.ndarray, values=0.0) -> np.ndarray:
        return self.factorization.solve(self.rhs(rhs, values))
