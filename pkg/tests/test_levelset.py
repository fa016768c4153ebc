import numpy as np
import pytest

from acflow.core.exceptions import InvalidParameterError, MaterialLawError, SpaceMismatchError
from acflow.fem import FeSpace, SolverStats, integrate, interpolate, values_at_quadrature
from acflow.levelset import (
    LevelSetParams, LevelSetStepper, MaterialLaw, compression_flux, overshoot,
    reconstruct_materials, sharp_disc, step_levelset_explicit, step_levelset_semi_implicit,
)
from acflow.mesh import Disk, generate_mesh


def constant_velocity(points, t=0.0):
    return np.stack([np.ones(points.shape[:-1]), np.zeros(points.shape[:-1])], axis=-1)


def rotation(points, t=0.0):
    return np.stack([-points[..., 1], points[..., 0]], axis=-1)


def moving_ramp(points, t):
    return points[..., 0] - t


# Materials
def test_linear_law_endpoints():
    law = MaterialLaw.linear(1.0, 100.0, 1.0, 10.0)
    assert law.density(0.0) == pytest.approx(1.0)
    assert law.density(1.0) == pytest.approx(100.0)
    assert law.viscosity(100.0) == pytest.approx(10.0)
    assert law.viscosity(50.5) == pytest.approx(5.5)
    assert law.d_viscosity(10.0) == pytest.approx(9.0 / 99.0)


def test_reciprocal_law():
    law = MaterialLaw.reciprocal(1.0, 100.0)
    assert law.viscosity(4.0) == pytest.approx(0.25)
    assert law.d_viscosity(2.0) == pytest.approx(-0.25)


def test_invalid_law_parameters():
    with pytest.raises(InvalidParameterError):
        MaterialLaw.linear(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        MaterialLaw.linear(2.0, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        MaterialLaw(1.0, 2.0, 'user')


def test_law_dict_round_trip():
    law = MaterialLaw.linear(1.0, 100.0, 0.01, 1.0)
    assert MaterialLaw.from_dict(law.to_dict()) == law


def test_reconstruction_is_nodal(square_p2):
    phi = interpolate(square_p2, lambda p, t: p[..., 0])
    rho, eta = reconstruct_materials(phi, MaterialLaw.linear(1.0, 3.0, 2.0, 4.0))
    assert np.allclose(rho.coefficients, 1.0 + 2.0 * phi.coefficients)
    assert np.allclose(eta.coefficients, 2.0 + 2.0 * phi.coefficients)


def test_reciprocal_law_rejects_nonpositive_density(square_p2):
    phi = interpolate(square_p2, -0.5)
    with pytest.raises(MaterialLawError):
        reconstruct_materials(phi, MaterialLaw.reciprocal(1.0, 100.0))


# Helpers
def test_overshoot():
    assert overshoot(np.array([0.0, 0.5, 1.0])) == 0.0
    assert overshoot(np.array([0.0, 1.03])) == pytest.approx(0.03)
    assert overshoot(np.array([-0.02, 1.01])) == pytest.approx(0.03)


def test_sharp_disc():
    indicator = sharp_disc((0.5, 0.0), 0.25)
    values = indicator(np.array([[0.5, 0.0], [0.5, 0.3], [0.0, 0.0]]))
    assert values.tolist() == [1.0, 0.0, 0.0]


def test_compression_flux_vanishes_in_pure_phases(square_p2):
    params = LevelSetParams(c_comp=1.0)
    for value in (0.0, 1.0):
        phi = interpolate(square_p2, value)
        assert np.abs(compression_flux(phi, params)).max() == 0.0


def test_compression_flux_of_flat_phi_is_zero(square_p2):
    params = LevelSetParams(c_comp=1.0)
    phi = interpolate(square_p2, 0.5)
    assert np.abs(compression_flux(phi, params)).max() == 0.0


def test_invalid_levelset_params():
    with pytest.raises(InvalidParameterError):
        LevelSetParams(c_visc=-1.0)
    with pytest.raises(InvalidParameterError):
        LevelSetParams(grad_floor=0.0)


# Steppers
@pytest.mark.parametrize("variant", ["semi_implicit", "explicit"])
def test_constant_state_is_preserved(square_p2, variant):
    phi = interpolate(square_p2, 0.5)
    u = interpolate(square_p2, constant_velocity)
    stepper = LevelSetStepper(square_p2, 0.1, LevelSetParams(c_comp=1.0), variant=variant)
    for step in range(3):
        phi = stepper.step(phi, u, t_next=0.1 * (step + 1))
    assert np.allclose(phi.coefficients, 0.5, atol=1e-12)


@pytest.mark.parametrize("variant", ["semi_implicit", "explicit"])
def test_translated_ramp_is_exact(square_p2, variant):
    # phi = x - t is transported exactly by u = (1, 0): linear in space and time
    tau = 0.05
    phi = interpolate(square_p2, moving_ramp, 0.0)
    u = interpolate(square_p2, constant_velocity)
    stepper = LevelSetStepper(square_p2, tau, variant=variant, bc_mode='dirichlet_exact')
    for step in range(1, 5):
        phi = stepper.step(phi, u, t_next=step * tau, boundary=moving_ramp)
    exact = interpolate(square_p2, moving_ramp, 4 * tau)
    assert np.allclose(phi.coefficients, exact.coefficients, atol=1e-9)


def test_explicit_stepper_factors_once(square_p2):
    stats = SolverStats()
    stepper = LevelSetStepper(square_p2, 0.05, variant='explicit', stats=stats)
    phi = interpolate(square_p2, lambda p, t: p[..., 0] * p[..., 1])
    u = interpolate(square_p2, constant_velocity)
    for step in range(10):
        phi = stepper.step(phi, u, t_next=0.05 * (step + 1))
    assert stats.factorizations['levelset'] == 1
    assert stats.solves['levelset'] == 10
    rebuilt = stepper.assemble_operator()
    assert np.array_equal(rebuilt.data, stepper.matrix.data)
    assert np.array_equal(rebuilt.indices, stepper.matrix.indices)


def test_one_off_steppers_agree_for_zero_velocity(square_p2):
    phi = interpolate(square_p2, lambda p, t: np.sin(p[..., 0]))
    u = interpolate(square_p2, lambda p, t: np.zeros(p.shape))
    semi = step_levelset_semi_implicit(phi, u, 0.1)
    explicit = step_levelset_explicit(phi, u, 0.1)
    assert np.allclose(semi.coefficients, explicit.coefficients, atol=1e-10)


def test_natural_boundary_conserves_mass(square_p2):
    phi = interpolate(square_p2, lambda p, t: p[..., 0])
    u = interpolate(square_p2, lambda p, t: np.zeros(p.shape))
    initial = integrate(square_p2, values_at_quadrature(phi))
    stepper = LevelSetStepper(square_p2, 0.05, LevelSetParams(c_comp=0.0), bc_mode='natural')
    for step in range(20):
        phi = stepper.step(phi, u, t_next=0.05 * (step + 1))
    assert abs(integrate(square_p2, values_at_quadrature(phi)) - initial) <= 1e-10


def test_variants_differ_by_second_order_in_tau(square_p2):
    phi = interpolate(square_p2, lambda p, t: np.sin(np.pi * p[..., 0]) * np.cos(np.pi * p[..., 1]))
    u = interpolate(square_p2, rotation)
    gaps = []
    for tau in (0.01, 0.005):
        semi = step_levelset_semi_implicit(phi, u, tau)
        explicit = step_levelset_explicit(phi, u, tau)
        gaps.append(np.abs(semi.coefficients - explicit.coefficients).max())
    assert gaps[1] > 0.0
    assert gaps[0] / gaps[1] > 2.5


def test_dirichlet_mode_needs_boundary_data(square_p2):
    stepper = LevelSetStepper(square_p2, 0.1, bc_mode='dirichlet_exact')
    phi = interpolate(square_p2, 0.0)
    u = interpolate(square_p2, constant_velocity)
    with pytest.raises(InvalidParameterError):
        stepper.step(phi, u, 0.1)


def test_fields_on_another_degree_are_rejected(unit_square, square_p2):
    p1 = FeSpace(unit_square, 1)
    stepper = LevelSetStepper(square_p2, 0.1)
    with pytest.raises(SpaceMismatchError):
        stepper.step(interpolate(p1, 0.0), interpolate(square_p2, constant_velocity))


def test_invalid_stepper_arguments(square_p2):
    with pytest.raises(InvalidParameterError):
        LevelSetStepper(square_p2, 0.0)
    with pytest.raises(InvalidParameterError):
        LevelSetStepper(square_p2, 0.1, variant='implicit')
    with pytest.raises(InvalidParameterError):
        LevelSetStepper(square_p2, 0.1, bc_mode='periodic')


@pytest.mark.slow
def test_rotating_disc_stays_bounded():
    h = 0.1
    tau = h / 4.0
    mesh = generate_mesh(Disk(1.0), h)
    space = FeSpace(mesh, 2)
    phi = interpolate(space, sharp_disc((0.5, 0.0), 0.25))
    u = interpolate(space, rotation)
    stepper = LevelSetStepper(space, tau, LevelSetParams(c_visc=0.125, c_comp=1.0), variant='explicit')
    n_steps = int(round(2.0 * np.pi / tau))
    for step in range(1, n_steps + 1):
        phi = stepper.step(phi, u, t_next=step * tau)
    assert overshoot(phi) <= 0.05
