"""
Sparse linear solvers.
Reusable direct factorizations (SuperLU), a Jacobi-preconditioned conjugate
gradient fallback for symmetric systems, and a GMRES solve preconditioned by an
existing factorization. Every solve is checked against the relative residual
contract before it is returned.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as spla

from acflow.config.constants import CG_MAX_ITERATIONS, SOLVER_RTOL
from acflow.core.exceptions import FactorizationError, InvalidParameterError, StepFailedError

logger = logging.getLogger(__name__)

METHODS = ('direct', 'cg', 'auto')


@dataclass
class SolverStats:
    """Instrumentation counters shared by the solvers of one run."""

    factorizations: Counter = field(default_factory=Counter)
    solves: Counter = field(default_factory=Counter)
    iterations: Counter = field(default_factory=Counter)
    stalls: Counter = field(default_factory=Counter)
    fallbacks: Dict[str, 'Factorization'] = field(default_factory=dict, repr=False)

    def record_factorization(self, label: str):
        self.factorizations[label] += 1

    def record_solve(self, label: str, iterations: int = 0):
        self.solves[label] += 1
        if iterations:
            self.iterations[label] += iterations

    def record_stall(self, label: str) -> bool:
        """Count a GMRES stall; True on the first one for this label."""
        self.stalls[label] += 1
        return self.stalls[label] == 1

    @property
    def total_factorizations(self) -> int:
        return sum(self.factorizations.values())

    def to_dict(self):
        return {
            'factorizations': dict(self.factorizations),
            'solves': dict(self.solves),
            'iterations': dict(self.iterations),
            'stalls': dict(self.stalls),
        }


def _pivot_diagnostics(matrix: sparse.csr_matrix) -> dict:
    diagonal = np.abs(matrix.diagonal())
    row_norms = np.asarray(abs(matrix).sum(axis=1)).ravel()
    return {
        'n': matrix.shape[0],
        'zero_rows': int(np.count_nonzero(row_norms == 0.0)),
        'min_abs_diagonal': float(diagonal.min()) if diagonal.size else 0.0,
        'argmin_diagonal': int(diagonal.argmin()) if diagonal.size else -1,
    }


def _check_square(matrix) -> sparse.csr_matrix:
    if not sparse.issparse(matrix):
        matrix = sparse.csr_matrix(np.atleast_2d(np.asarray(matrix, dtype=float)))
    matrix = matrix.tocsr()
    if matrix.shape[0] != matrix.shape[1]:
        raise InvalidParameterError(f"matrix must be square, got shape {matrix.shape}")
    return matrix


def _same_matrix(a: sparse.csr_matrix, b: sparse.csr_matrix) -> bool:
    return (a.shape == b.shape and a.nnz == b.nnz and np.array_equal(a.indptr, b.indptr)
            and np.array_equal(a.indices, b.indices) and np.array_equal(a.data, b.data))


def _jacobi(matrix: sparse.csr_matrix) -> spla.LinearOperator:
    diagonal = matrix.diagonal()
    if np.any(diagonal == 0.0):
        raise FactorizationError("zero diagonal entry, Jacobi preconditioner undefined",
                                 _pivot_diagnostics(matrix))
    inverse = 1.0 / diagonal
    return spla.LinearOperator(matrix.shape, matvec=lambda x: inverse * x)


class Factorization:
    """Reusable solver for one (constrained) matrix.

    `method='direct'` keeps a SuperLU factorization; `method='cg'` keeps the
    Jacobi preconditioner and runs conjugate gradients per right-hand side.
    """

    def __init__(self, matrix, method: str = 'direct', rtol: float = SOLVER_RTOL,
                 label: str = 'system', stats: Optional[SolverStats] = None):
        if method not in METHODS:
            raise InvalidParameterError(f"unknown solver method '{method}'")
        self.matrix = _check_square(matrix)
        self.rtol = rtol
        self.label = label
        self.stats = stats
        self.method = method
        self._lu = None
        self._preconditioner = None

        if method in ('direct', 'auto'):
            try:
                self._lu = spla.splu(self.matrix.tocsc())
                self.method = 'direct'
            except RuntimeError as e:
                raise FactorizationError(f"factorization of '{label}' failed: {e}",
                                         _pivot_diagnostics(self.matrix)) from e
            except MemoryError:
                if method == 'direct':
                    raise
                logger.warning(f"Direct factorization of '{label}' ran out of memory; using CG")
                self.method = 'cg'
        if self.method == 'cg':
            self._preconditioner = _jacobi(self.matrix)

        if stats is not None:
            stats.record_factorization(label)
        logger.debug(f"Factorized '{label}' ({self.method}, n={self.matrix.shape[0]}, nnz={self.matrix.nnz})")

    @property
    def shape(self):
        return self.matrix.shape

    def residual(self, x: np.ndarray, b: np.ndarray) -> float:
        """Relative residual ||Ax - b|| / ||b|| (absolute when b = 0)."""
        norm_b = np.linalg.norm(b)
        r = np.linalg.norm(self.matrix @ x - b)
        return float(r / norm_b) if norm_b > 0.0 else float(r)

    def _apply(self, b: np.ndarray):
        if self.method == 'direct':
            return self._lu.solve(b), 0
        iterations = [0]

        def count(_):
            iterations[0] += 1

        x, info = spla.cg(self.matrix, b, rtol=0.1 * self.rtol, maxiter=CG_MAX_ITERATIONS,
                          M=self._preconditioner, callback=count)
        if info != 0:
            raise StepFailedError(f"CG for '{self.label}' did not converge (info={info})")
        return x, iterations[0]

    def apply_inverse(self, b: np.ndarray) -> np.ndarray:
        """Unchecked application of the stored inverse (preconditioner use)."""
        return self._apply(np.asarray(b, dtype=float))[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if b.shape[0] != self.matrix.shape[0]:
            raise InvalidParameterError(f"rhs of length {b.shape[0]} for a {self.matrix.shape} system")
        if not np.all(np.isfinite(b)):
            raise StepFailedError(f"non-finite right-hand side for '{self.label}'")

        x, iterations = self._apply(b)
        rel = self.residual(x, b)
        if rel > self.rtol and self.method == 'direct':
            # one step of iterative refinement
            correction, _ = self._apply(b - self.matrix @ x)
            x = x + correction
            rel = self.residual(x, b)
        if not np.all(np.isfinite(x)) or rel > self.rtol:
            raise StepFailedError(f"solve of '{self.label}' missed the residual target: {rel:.3e} > {self.rtol:.1e}")

        if self.stats is not None:
            self.stats.record_solve(self.label, iterations)
        logger.debug(f"Solved '{self.label}': relative residual {rel:.3e}")
        return x


def factorize(matrix, method: str = 'direct', rtol: float = SOLVER_RTOL,
              label: str = 'system', stats: Optional[SolverStats] = None) -> Factorization:
    return Factorization(matrix, method=method, rtol=rtol, label=label, stats=stats)


def solve(factorization: Factorization, b: np.ndarray) -> np.ndarray:
    return factorization.solve(b)


def solve_preconditioned(matrix, b: np.ndarray, preconditioner: Factorization,
                         rtol: float = SOLVER_RTOL, label: str = 'system',
                         stats: Optional[SolverStats] = None) -> np.ndarray:
    """Solve a system close to an already factored one.

    GMRES preconditioned with `preconditioner`; falls back to a direct
    factorization of `matrix` when GMRES stalls. With `stats`, that factorization
    is kept per label and reused while the stalled matrix stays the same.
    """
    matrix = _check_square(matrix)
    b = np.asarray(b, dtype=float)
    norm_b = np.linalg.norm(b)
    if norm_b == 0.0:
        return np.zeros_like(b)

    operator = spla.LinearOperator(matrix.shape, matvec=preconditioner.apply_inverse)
    iterations = [0]

    def count(_):
        iterations[0] += 1

    x, info = spla.gmres(matrix, b, rtol=0.1 * rtol, restart=50, maxiter=20, M=operator,
                         callback=count, callback_type="pr_norm")
    if info == 0:
        rel = float(np.linalg.norm(matrix @ x - b) / norm_b)
        if rel <= rtol:
            if stats is not None:
                stats.record_solve(label, iterations[0])
            logger.debug(f"GMRES '{label}': {iterations[0]} iterations, relative residual {rel:.3e}")
            return x

    if stats is not None and stats.record_stall(label):
        logger.warning(f"GMRES for '{label}' stalled (info={info}); falling back to a direct solve")
    else:
        logger.debug(f"GMRES for '{label}' stalled (info={info})")
    fallback = stats.fallbacks.get(label) if stats is not None else None
    if fallback is None or not _same_matrix(fallback.matrix, matrix):
        fallback = Factorization(matrix, method='direct', rtol=rtol, label=f"{label}_full", stats=stats)
        if stats is not None:
            stats.fallbacks[label] = fallback
    return fallback.solve(b)
