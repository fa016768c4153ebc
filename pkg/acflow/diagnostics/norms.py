"""
Error norms against exact fields and convergence rates.
"""

import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np

from acflow.config.constants import ZERO_NORM_THRESHOLD
from acflow.core.exceptions import InvalidParameterError
from acflow.fem.fields import Field, call_pointwise, values_at_quadrature

logger = logging.getLogger(__name__)

NORMS = ('L2', 'L1')


def _norm(values: np.ndarray, jxw: np.ndarray, norm: str) -> float:
    # values (m, q) or (m, q, 2)
    magnitude = values ** 2 if values.ndim == 2 else np.sum(values ** 2, axis=-1)
    if norm == 'L2':
        return float(np.sqrt(np.sum(magnitude * jxw)))
    return float(np.sum(np.sqrt(magnitude) * jxw))


def error_norm(field: Field, exact: Callable, t: float, norm: str = 'L2') -> Tuple[float, bool]:
    """Relative error of field against exact(points, t) by element quadrature.

    Returns:
        (value, absolute): absolute is True when the exact norm is below the
        zero threshold and the plain error norm is returned instead
    """
    if norm not in NORMS:
        raise InvalidParameterError(f"unknown norm '{norm}', expected one of {NORMS}")
    space = field.space
    reference = call_pointwise(exact, space.quadrature_points, t, what="exact solution")
    computed = values_at_quadrature(field)
    if reference.shape != computed.shape:
        reference = np.broadcast_to(reference, computed.shape)

    error = _norm(computed - reference, space.jxw, norm)
    scale = _norm(reference, space.jxw, norm)
    if scale < ZERO_NORM_THRESHOLD:
        logger.warning(f"Exact {norm} norm {scale:.3e} below threshold at t={t:.6g}; reporting absolute error")
        return error, True
    return error / scale, False


def relative_error(field: Field, exact: Callable, t: float, norm: str = 'L2') -> float:
    """||field - exact|| / ||exact|| (absolute norm when ||exact|| vanishes)."""
    return error_norm(field, exact, t, norm)[0]


def convergence_rate(errors: Sequence[float], h_values: Sequence[float]) -> List[float]:
    """Observed orders log(e_{k-1}/e_k) / log(h_{k-1}/h_k), one per refinement."""
    errors = np.asarray(errors, dtype=float)
    h_values = np.asarray(h_values, dtype=float)
    if errors.shape != h_values.shape or errors.ndim != 1:
        raise InvalidParameterError("errors and h values must be flat lists of equal length")
    if errors.size < 2:
        raise InvalidParameterError("at least two levels are needed for a rate")
    if np.any(~(errors > 0.0)) or np.any(~(h_values > 0.0)):
        raise InvalidParameterError("errors and h values must be positive")
    if np.any(h_values[1:] == h_values[:-1]):
        raise InvalidParameterError("consecutive h values must differ")
    rates = np.log(errors[:-1] / errors[1:]) / np.log(h_values[:-1] / h_values[1:])
    return [float(r) for r in rates]
