"""
Galerkin assembly of bilinear and linear forms.

Element matrices are computed for all triangles at once with the degree-5 rule,
then scattered into a COO matrix and converted to CSR. Duplicate entries are
summed in the fixed COO order, so assembling the same form twice gives
bitwise-identical matrices.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
from scipy import sparse

from acflow.core.exceptions import InvalidParameterError, SpaceMismatchError
from acflow.fem.fields import ScalarField, VectorField, call_pointwise, values_at_quadrature
from acflow.fem.spaces import FeSpace

logger = logging.getLogger(__name__)

SYMMETRIC_FORMS = {'mass', 'weighted_mass', 'stiffness_eps', 'weighted_stiffness_eps',
                   'grad_div', 'diffusion_scalar'}
VECTOR_FORMS = {'stiffness_eps', 'weighted_stiffness_eps', 'grad_div'}
SCALAR_FORMS = {'mass', 'weighted_mass', 'convection', 'diffusion_scalar'}
MIXED_FORMS = {'gradient', 'divergence'}


@dataclass(frozen=True)
class Form:
    """Bilinear form descriptor.

    Attributes:
        name: one of the assemble_form names
        coefficient: weight w or advecting field b (number, field or quadrature values)
        vector: block-diagonal copy on the blocked vector layout (scalar forms only)
    """

    name: str
    coefficient: Any = None
    vector: bool = False


def mass(vector: bool = False) -> Form:
    return Form('mass', vector=vector)


def weighted_mass(w, vector: bool = False) -> Form:
    return Form('weighted_mass', w, vector)


def stiffness_eps() -> Form:
    return Form('stiffness_eps')


def weighted_stiffness_eps(w) -> Form:
    return Form('weighted_stiffness_eps', w)


def grad_div() -> Form:
    return Form('grad_div')


def convection(b, vector: bool = False) -> Form:
    return Form('convection', b, vector)


def diffusion_scalar(w=1.0, vector: bool = False) -> Form:
    return Form('diffusion_scalar', w, vector)


def gradient() -> Form:
    """(grad q, v): pressure trial space into the vector test space."""
    return Form('gradient')


def divergence() -> Form:
    """(div u, q): vector trial space into the pressure test space."""
    return Form('divergence')


def coefficient_at_quadrature(coefficient, space: FeSpace, vector: bool = False):
    """Resolve a coefficient to a float or to values at the quadrature points of `space`."""
    if coefficient is None:
        return 1.0
    if isinstance(coefficient, (int, float, np.floating)):
        return float(coefficient)
    if isinstance(coefficient, (ScalarField, VectorField)):
        space.check_same_mesh(coefficient.space)
        if vector != (coefficient.n_components == 2):
            raise SpaceMismatchError(
                f"expected a {'vector' if vector else 'scalar'} coefficient field"
            )
        return values_at_quadrature(coefficient)

    values = np.asarray(coefficient, dtype=float)
    expected = space.jxw.shape + ((2,) if vector else ())
    if values.shape != expected:
        raise SpaceMismatchError(f"coefficient shape {values.shape} does not match quadrature {expected}")
    return values


def _scatter(element: np.ndarray, rows: np.ndarray, cols: np.ndarray, shape) -> sparse.csr_matrix:
    """element: (m, a, b); rows: (m, a); cols: (m, b)."""
    n_rows, n_cols = element.shape[1], element.shape[2]
    i = np.broadcast_to(rows[:, :, None], (rows.shape[0], n_rows, n_cols))
    j = np.broadcast_to(cols[:, None, :], (cols.shape[0], n_rows, n_cols))
    matrix = sparse.coo_matrix((element.ravel(), (i.ravel(), j.ravel())), shape=shape).tocsr()
    matrix.sum_duplicates()
    matrix.sort_indices()
    return matrix


def _block_rows(space: FeSpace) -> np.ndarray:
    """(m, 2 * n_local) vector dofs of each triangle, x-block first."""
    return np.hstack([space.dof_map, space.dof_map + space.n_dofs])


def _scalar_element(space: FeSpace, form: Form) -> np.ndarray:
    phi = space.values
    grads = space.gradients
    jxw = space.jxw

    if form.name == 'mass':
        return np.einsum('mq,qa,qb->mab', jxw, phi, phi)
    if form.name == 'weighted_mass':
        w = coefficient_at_quadrature(form.coefficient, space) * np.ones_like(jxw)
        return np.einsum('mq,qa,qb->mab', jxw * w, phi, phi)
    if form.name == 'diffusion_scalar':
        w = coefficient_at_quadrature(form.coefficient, space) * np.ones_like(jxw)
        return np.einsum('mq,mqad,mqbd->mab', jxw * w, grads, grads)
    # convection: test a, trial b, (b . grad phi_b) phi_a
    b = coefficient_at_quadrature(form.coefficient, space, vector=True)
    return np.einsum('mq,qa,mqd,mqbd->mab', jxw, phi, b, grads)


def _vector_element(space: FeSpace, form: Form) -> np.ndarray:
    """Element matrix on the blocked local layout, (m, 2 * n_local, 2 * n_local)."""
    grads = space.gradients
    jxw = space.jxw
    n_local = space.n_local
    if form.name == 'weighted_stiffness_eps':
        jxw = jxw * coefficient_at_quadrature(form.coefficient, space)

    element = np.zeros((jxw.shape[0], 2 * n_local, 2 * n_local))
    if form.name == 'grad_div':
        for alpha in range(2):
            for beta in range(2):
                block = np.einsum('mq,mqa,mqb->mab', jxw, grads[..., alpha], grads[..., beta])
                element[:, alpha * n_local:(alpha + 1) * n_local, beta * n_local:(beta + 1) * n_local] = block
        return element

    # eps(phi_j e_beta) : eps(phi_i e_alpha) = (delta_ab grad phi_i . grad phi_j + d_b phi_i d_a phi_j) / 2
    laplace = np.einsum('mq,mqad,mqbd->mab', jxw, grads, grads)
    for alpha in range(2):
        for beta in range(2):
            block = 0.5 * np.einsum('mq,mqa,mqb->mab', jxw, grads[..., beta], grads[..., alpha])
            if alpha == beta:
                block = block + 0.5 * laplace
            element[:, alpha * n_local:(alpha + 1) * n_local, beta * n_local:(beta + 1) * n_local] = block
    return element


def assemble_form(space: FeSpace, form: Form, trial_space: Optional[FeSpace] = None) -> sparse.csr_matrix:
    """Assemble the Galerkin matrix of a bilinear form.

    Args:
        space: test space (and trial space unless `trial_space` is given)
        form: descriptor built with mass(), stiffness_eps(), convection(b), ...
        trial_space: trial space of the mixed forms gradient/divergence

    Returns:
        scipy.sparse.csr_matrix, rows indexed by test dofs
    """
    if not isinstance(form, Form):
        raise InvalidParameterError(f"form descriptor expected, got {form!r}")
    name = form.name

    if name in SCALAR_FORMS:
        element = _scalar_element(space, form)
        n = space.n_dofs
        matrix = _scatter(element, space.dof_map, space.dof_map, (n, n))
        if form.vector:
            matrix = sparse.block_diag((matrix, matrix), format='csr')
            matrix.sort_indices()
        return matrix

    if name in VECTOR_FORMS:
        element = _vector_element(space, form)
        rows = _block_rows(space)
        return _scatter(element, rows, rows, (2 * space.n_dofs, 2 * space.n_dofs))

    if name in MIXED_FORMS:
        if trial_space is None:
            raise InvalidParameterError(f"form '{name}' needs a trial space")
        space.check_same_mesh(trial_space)
        velocity, pressure = (space, trial_space) if name == 'gradient' else (trial_space, space)
        if velocity.degree <= pressure.degree:
            raise SpaceMismatchError(
                f"'{name}' pairs a P{velocity.degree} vector space with a P{pressure.degree} pressure space"
            )
        rows = _block_rows(velocity)

        if name == 'gradient':
            # block alpha: int phi_i d_alpha psi_j
            blocks = [np.einsum('mq,qa,mqb->mab', velocity.jxw, velocity.values, pressure.gradients[..., alpha])
                      for alpha in range(2)]
            element = np.concatenate(blocks, axis=1)
            return _scatter(element, rows, pressure.dof_map, (2 * velocity.n_dofs, pressure.n_dofs))

        # block alpha: int psi_i d_alpha phi_j
        blocks = [np.einsum('mq,qa,mqb->mab', pressure.jxw, pressure.values, velocity.gradients[..., alpha])
                  for alpha in range(2)]
        element = np.concatenate(blocks, axis=2)
        return _scatter(element, pressure.dof_map, rows, (pressure.n_dofs, 2 * velocity.n_dofs))

    raise InvalidParameterError(f"unknown form descriptor '{name}'")


# Linear forms
@dataclass(frozen=True)
class LinearForm:
    """Linear form descriptor.

    Attributes:
        name: 'source', 'applied' or 'flux_divergence'
        data: source callable f(points, t) or quadrature values; flux values F (m, n_quad, 2)
        form: bilinear form for 'applied'
        field: field the form is applied to
        vector: vector-valued source
    """

    name: str
    data: Any = None
    form: Optional[Form] = None
    field: Any = None
    vector: bool = False


def source(f, vector: bool = False) -> LinearForm:
    return LinearForm('source', data=f, vector=vector)


def applied(form: Form, field) -> LinearForm:
    return LinearForm('applied', form=form, field=field)


def flux_divergence(flux) -> LinearForm:
    """int F . grad psi for a flux given at the quadrature points."""
    return LinearForm('flux_divergence', data=flux)


def _gather(element: np.ndarray, rows: np.ndarray, n: int) -> np.ndarray:
    return np.bincount(rows.ravel(), weights=element.ravel(), minlength=n)


def assemble_rhs(space: FeSpace, linear_form: LinearForm, t: float = 0.0,
                 trial_space: Optional[FeSpace] = None) -> np.ndarray:
    """Assemble a load vector.

    Source callables are evaluated at the physical quadrature points at time t;
    their failures propagate as SourceEvaluationError.
    """
    if not isinstance(linear_form, LinearForm):
        raise InvalidParameterError(f"linear form descriptor expected, got {linear_form!r}")
    name = linear_form.name

    if name == 'source':
        data = linear_form.data
        if callable(data):
            values = call_pointwise(data, space.quadrature_points, t, what="source")
        else:
            values = coefficient_at_quadrature(data, space, vector=linear_form.vector)
            values = values * np.ones(space.jxw.shape + ((2,) if linear_form.vector else ()))
        if not linear_form.vector:
            if values.shape != space.jxw.shape:
                raise SpaceMismatchError(f"scalar source returned shape {values.shape}")
            return _gather(np.einsum('mq,qa->ma', space.jxw * values, space.values), space.dof_map, space.n_dofs)
        if values.shape != space.jxw.shape + (2,):
            raise SpaceMismatchError(f"vector source returned shape {values.shape}")
        parts = [_gather(np.einsum('mq,qa->ma', space.jxw * values[..., c], space.values),
                         space.dof_map, space.n_dofs) for c in range(2)]
        return np.concatenate(parts)

    if name == 'applied':
        field = linear_form.field
        matrix = assemble_form(space, linear_form.form, trial_space=trial_space)
        if matrix.shape[1] != field.coefficients.shape[0]:
            raise SpaceMismatchError(f"form of shape {matrix.shape} cannot act on {field.coefficients.shape[0]} coefficients")
        return matrix @ field.coefficients

    if name == 'flux_divergence':
        flux = coefficient_at_quadrature(linear_form.data, space, vector=True)
        return _gather(np.einsum('mq,mqd,mqad->ma', space.jxw, flux, space.gradients), space.dof_map, space.n_dofs)

    raise InvalidParameterError(f"unknown linear form '{name}'")


def is_symmetric(matrix: sparse.spmatrix, rtol: float = 1e-13) -> bool:
    scale = abs(matrix).max()
    if scale == 0.0:
        return True
    return abs(matrix - matrix.T).max() <= rtol * scale
