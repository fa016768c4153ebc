import numpy as np
import pytest
from scipy import sparse

from acflow.core.exceptions import (
    FactorizationError, InvalidParameterError, PointNotFoundError, SourceEvaluationError,
    SpaceMismatchError,
)
from acflow.fem import (
    DirichletOperator, FeSpace, ScalarField, SolverStats, VectorField, apply_dirichlet, assemble_form,
    assemble_rhs, convection, divergence, divergence_at_quadrature, evaluate, evaluate_gradient,
    factorize, grad_div, gradient, integrate, interpolate, is_symmetric, mass, solve_preconditioned,
    source, stiffness_eps, weighted_stiffness_eps,
)
from acflow.fem import solvers
from acflow.fem.basis import basis_values, reference_nodes
from acflow.fem.quadrature import QUAD_WEIGHTS, integrate_on_triangle
from acflow.mesh import Rectangle, generate_mesh

UNIT_TRIANGLE = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def rotation(points, t=0.0):
    return np.stack([-points[..., 1], points[..., 0]], axis=-1)


def stretch(points, t=0.0):
    return np.stack([points[..., 0], np.zeros_like(points[..., 0])], axis=-1)


# Quadrature and basis
def test_quadrature_weights_sum_to_one():
    assert QUAD_WEIGHTS.sum() == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("px, py, exact", [
    (0, 0, 1.0 / 2.0),
    (2, 0, 1.0 / 12.0),
    (1, 1, 1.0 / 24.0),
    (5, 0, 1.0 / 42.0),
    (3, 2, 1.0 / 420.0),
])
def test_quadrature_is_exact_to_degree_five(px, py, exact):
    value = integrate_on_triangle(lambda p: p[:, 0] ** px * p[:, 1] ** py, UNIT_TRIANGLE)
    assert value == pytest.approx(exact, rel=1e-13)


@pytest.mark.parametrize("degree", [1, 2])
def test_basis_is_nodal(degree):
    values = basis_values(degree, reference_nodes(degree))
    assert np.allclose(values, np.eye(values.shape[0]), atol=1e-14)


@pytest.mark.parametrize("degree", [1, 2])
def test_basis_partition_of_unity(degree):
    rng = np.random.default_rng(0)
    bary = rng.dirichlet(np.ones(3), size=20)
    assert np.allclose(basis_values(degree, bary).sum(axis=1), 1.0, atol=1e-14)


def test_unsupported_degree(unit_square):
    with pytest.raises(InvalidParameterError):
        FeSpace(unit_square, 3)


# Spaces
def test_dof_counts(unit_square, square_spaces):
    n_vertices = unit_square.n_vertices
    assert square_spaces.pressure.n_dofs == n_vertices
    assert square_spaces.velocity.n_dofs == n_vertices + unit_square.n_edges
    assert square_spaces.n_dofs == 2 * square_spaces.velocity.n_dofs + n_vertices


def test_boundary_dofs_lie_on_boundary(square_p2):
    coords = square_p2.dof_coordinates[square_p2.boundary_dofs()]
    on_side = np.isclose(coords, 0.0) | np.isclose(coords, 1.0)
    assert np.all(on_side.any(axis=1))


# Fields
def test_interpolation_reproduces_quadratics(square_p2):
    def quadratic(points, t=0.0):
        x, y = points[..., 0], points[..., 1]
        return 1.0 + x - 2.0 * y + x * y + 3.0 * y ** 2

    field = interpolate(square_p2, quadratic)
    for point in ([0.3, 0.7], [0.91, 0.05], [0.5, 0.5]):
        assert evaluate(field, point) == pytest.approx(quadratic(np.array(point)), abs=1e-12)


def test_gradient_of_linear_field(square_p2):
    field = interpolate(square_p2, lambda p, t: 2.0 * p[..., 0] - p[..., 1])
    grads = evaluate_gradient(field)
    assert np.allclose(grads[..., 0], 2.0, atol=1e-12)
    assert np.allclose(grads[..., 1], -1.0, atol=1e-12)


def test_rotation_is_divergence_free(square_p2):
    u = interpolate(square_p2, rotation)
    assert isinstance(u, VectorField)
    assert np.abs(divergence_at_quadrature(u)).max() < 1e-12


def test_integrate_constant(square_p2):
    assert integrate(square_p2, lambda p, t: np.ones(p.shape[:-1])) == pytest.approx(1.0, abs=1e-13)


def test_field_length_mismatch(square_p2):
    with pytest.raises(SpaceMismatchError):
        ScalarField(square_p2, np.zeros(3))


def test_point_outside_mesh(square_p2):
    field = interpolate(square_p2, 1.0)
    with pytest.raises(PointNotFoundError):
        evaluate(field, [1.5, 0.5])


def test_failing_interpolant_is_wrapped(square_p2):
    def broken(points, t):
        raise ZeroDivisionError("boom")

    with pytest.raises(SourceEvaluationError):
        interpolate(square_p2, broken)


def test_fields_are_read_only(square_p2):
    field = interpolate(square_p2, 1.0)
    with pytest.raises(ValueError):
        field.coefficients[0] = 2.0


# Assembly
def test_mass_matrix_integrates_constants(square_p2):
    m = assemble_form(square_p2, mass())
    ones = np.ones(square_p2.n_dofs)
    assert ones @ m @ ones == pytest.approx(1.0, abs=1e-13)
    assert is_symmetric(m)


def test_vector_mass_is_block_diagonal(square_p2):
    scalar = assemble_form(square_p2, mass())
    vector = assemble_form(square_p2, mass(vector=True))
    n = square_p2.n_dofs
    assert abs(vector[:n, :n] - scalar).max() < 1e-15
    assert abs(vector[:n, n:]).max() == 0.0


def test_strain_and_grad_div_vanish_on_rigid_rotation(square_p2):
    u = interpolate(square_p2, rotation)
    assert np.abs(assemble_form(square_p2, stiffness_eps()) @ u.coefficients).max() < 1e-12
    assert np.abs(assemble_form(square_p2, grad_div()) @ u.coefficients).max() < 1e-12


def test_strain_energy_of_stretch(square_p2):
    # eps = diag(1, 0) so (eps, eps) = 1 on the unit square
    u = interpolate(square_p2, stretch)
    e = assemble_form(square_p2, stiffness_eps())
    assert u.coefficients @ e @ u.coefficients == pytest.approx(1.0, abs=1e-12)
    assert is_symmetric(e)


def test_weighted_strain_scales(square_p2):
    eta = interpolate(square_p2, 3.0)
    e = assemble_form(square_p2, stiffness_eps())
    weighted = assemble_form(square_p2, weighted_stiffness_eps(eta))
    assert abs(weighted - 3.0 * e).max() < 1e-12


def test_divergence_and_gradient_are_transposes(square_spaces):
    b = assemble_form(square_spaces.velocity, gradient(), trial_space=square_spaces.pressure)
    d = assemble_form(square_spaces.pressure, divergence(), trial_space=square_spaces.velocity)
    assert b.shape == (2 * square_spaces.velocity.n_dofs, square_spaces.pressure.n_dofs)
    # (grad q, v) = -(q, div v) + boundary terms; interior rows only agree up to sign
    interior = np.setdiff1d(np.arange(square_spaces.velocity.n_dofs), square_spaces.velocity.boundary_dofs())
    rows = square_spaces.velocity.vector_dofs(interior)
    assert abs(b[rows] + d.T.tocsr()[rows]).max() < 1e-12


def test_divergence_of_stretch_integrates_to_area(square_spaces):
    u = interpolate(square_spaces.velocity, stretch)
    d = assemble_form(square_spaces.pressure, divergence(), trial_space=square_spaces.velocity)
    assert (d @ u.coefficients).sum() == pytest.approx(1.0, abs=1e-12)


def test_gradient_of_constant_pressure_vanishes(square_spaces):
    b = assemble_form(square_spaces.velocity, gradient(), trial_space=square_spaces.pressure)
    assert np.abs(b @ np.ones(square_spaces.pressure.n_dofs)).max() < 1e-12


def test_convection_by_constant_field_kills_constants(square_p2):
    b = interpolate(square_p2, lambda p, t: np.stack([np.ones(p.shape[:-1]), 0.5 * np.ones(p.shape[:-1])], -1))
    c = assemble_form(square_p2, convection(b))
    assert np.abs(c @ np.ones(square_p2.n_dofs)).max() < 1e-12


def test_source_rhs_integrates(square_p2):
    rhs = assemble_rhs(square_p2, source(lambda p, t: 2.0 * np.ones(p.shape[:-1])))
    assert rhs.sum() == pytest.approx(2.0, abs=1e-13)


def test_assembly_is_deterministic(square_p2):
    first = assemble_form(square_p2, stiffness_eps())
    second = assemble_form(square_p2, stiffness_eps())
    assert np.array_equal(first.indices, second.indices)
    assert np.array_equal(first.data, second.data)


# Constraints and solvers
def test_dirichlet_poisson_recovers_linear_solution(square_p2):
    # -lap u = 0 with u = x + y on the boundary
    from acflow.fem import diffusion_scalar
    k = assemble_form(square_p2, diffusion_scalar())
    dofs = square_p2.boundary_dofs()
    exact = lambda p: p[..., 0] + p[..., 1]
    values = exact(square_p2.dof_coordinates[dofs])
    system = apply_dirichlet(k, np.zeros(square_p2.n_dofs), dofs, values)
    assert is_symmetric(system.matrix)
    x = factorize(system.matrix).solve(system.rhs)
    assert np.allclose(x, exact(square_p2.dof_coordinates), atol=1e-10)


def test_dirichlet_operator_reuses_factorization(square_p2):
    stats = SolverStats()
    m = assemble_form(square_p2, mass())
    op = DirichletOperator(m, square_p2.boundary_dofs(), label='mass', stats=stats)
    for value in (0.0, 1.0, 2.0):
        op.solve(m @ np.full(square_p2.n_dofs, value), value)
    assert stats.factorizations['mass'] == 1
    assert stats.solves['mass'] == 3


def test_cg_matches_direct(square_p2):
    m = assemble_form(square_p2, mass())
    b = m @ np.linspace(0.0, 1.0, square_p2.n_dofs)
    direct = factorize(m, method='direct').solve(b)
    iterative = factorize(m, method='cg').solve(b)
    assert np.allclose(direct, iterative, atol=1e-8)


def test_singular_matrix_reports_pivots():
    with pytest.raises(FactorizationError) as info:
        factorize(sparse.csr_matrix((3, 3)))
    assert info.value.pivot_info


def test_preconditioned_solve_of_perturbed_system(square_p2):
    m = assemble_form(square_p2, mass())
    base = factorize(m)
    c = assemble_form(square_p2, convection(interpolate(square_p2, rotation)))
    full = (m + 0.1 * c).tocsr()
    b = full @ np.ones(square_p2.n_dofs)
    x = solve_preconditioned(full, b, base)
    assert np.allclose(x, 1.0, atol=1e-8)


def test_stalled_gmres_reuses_the_full_factorization(square_p2, monkeypatch, caplog):
    monkeypatch.setattr(solvers.spla, 'gmres', lambda matrix, b, **kwargs: (np.zeros_like(b), 1))
    m = assemble_form(square_p2, mass())
    c = assemble_form(square_p2, convection(interpolate(square_p2, rotation)))
    full = (m + 0.1 * c).tocsr()
    base = factorize(m)
    stats = SolverStats()
    with caplog.at_level('DEBUG', logger='acflow.fem.solvers'):
        for _ in range(3):
            x = solve_preconditioned(full, full @ np.ones(square_p2.n_dofs), base,
                                     label='momentum', stats=stats)
            assert np.allclose(x, 1.0, atol=1e-8)
    assert stats.stalls['momentum'] == 3
    assert stats.factorizations['momentum_full'] == 1
    assert stats.solves['momentum_full'] == 3
    warnings = [r for r in caplog.records if r.levelname == 'WARNING' and 'stalled' in r.getMessage()]
    assert len(warnings) == 1

    changed = (m + 0.2 * c).tocsr()
    solve_preconditioned(changed, changed @ np.ones(square_p2.n_dofs), base, label='momentum', stats=stats)
    assert stats.factorizations['momentum_full'] == 2


def test_structured_rectangle_space_sizes():
    mesh = generate_mesh(Rectangle((0.0, 2.0), (0.0, 1.0)), 0.5)
    space = FeSpace(mesh, 2)
    assert space.n_dofs == (2 * 4 + 1) * (2 * 2 + 1)
