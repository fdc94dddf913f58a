# tests/energy/test_energy.py
import numpy as np
import pytest

from helpers import (
    Logarithmic,
    NonlinearityError,
    PowerMass,
    build_grid,
    dilate,
    energy,
    l2_gradient,
    nonlinear_integral,
    random_smooth_field,
    reduced_energy,
)
from helpers.energy import reduced_state
from helpers.radial_operators import bilaplacian_matrix, laplacian_matrix

GAUSSIAN_EXPECTED = "gaussian_n5.json"


def _into_positive_set(u, nl, eps=None):
    """Double the amplitude until int G_eps(u) > 0."""
    for _ in range(30):
        if nonlinear_integral(u, nl, eps) > 0:
            return u
        u = 2.0 * u
    raise AssertionError(f"{nl.name}: no amplitude up to 2^30 reaches int G > 0")


@pytest.fixture(scope="module")
def wide_grid():
    """Large, fine grid so dilations by 1/2 and 2 lose nothing to truncation."""
    return build_grid(5, 40.0, 8001)


@pytest.mark.energy
def test_log_energy_of_unit_gaussian(gaussian5, log5, validator, expected_path):
    parts = energy(gaussian5, log5)
    actual = {
        "N": 5,
        "norms": {"bilap_sq": parts.bilap_sq},
        "log_model": {"G_int": parts.G_int, "J": parts.J_value},
    }
    print("[Energy] Unit Gaussian, log model:", parts.to_dict())
    validator.compare_with_expected(
        actual,
        expected_path(GAUSSIAN_EXPECTED),
        rel_tol=1e-6,
        ignore_keys=("l2_sq", "grad_sq", "classical_lsi", "interpolation", "biharmonic_lsi_bound_constant"),
    )
    assert parts.epsilon is None
    assert set(parts.to_dict()) == {"bilap_sq", "G_int", "J", "epsilon"}


@pytest.mark.energy
def test_power_mass_energy_of_gaussian(gaussian5, power5, validator):
    # int u^4 = pi^(-5) (pi/2)^(5/2), int u^2 = 1 for the unit Gaussian
    quartic = np.pi ** (-5.0) * (np.pi / 2.0) ** 2.5
    parts = energy(3.0 * gaussian5, power5)
    validator.assert_close(parts.G_int, 81.0 * quartic / 4.0 - 9.0 / 2.0, rel=1e-8, label="int G")
    validator.assert_close(parts.J_value, 0.5 * 9.0 * 8.75 - parts.G_int, rel=1e-7, label="J")


@pytest.mark.energy
def test_regularized_energy_sits_above_true_integral(gaussian5, log5):
    u = 20.0 * gaussian5
    true = nonlinear_integral(u, log5)
    previous = None
    for eps in (0.5, 0.1, 0.01, 1e-4):
        value = nonlinear_integral(u, log5, eps)
        assert value >= true
        if previous is not None:
            assert value <= previous
        previous = value
    assert energy(u, log5, 0.1).epsilon == 0.1


@pytest.mark.energy
def test_l2_gradient_is_bilaplacian_minus_g(gaussian5, power5):
    u = 4.0 * gaussian5
    grad = l2_gradient(u, power5)
    expected = bilaplacian_matrix(u.grid) @ u.values - np.asarray(power5.g(u.values))
    np.testing.assert_allclose(grad.values, expected, rtol=0.0, atol=1e-12)
    regularized = l2_gradient(u, power5, 0.25)
    expected_eps = bilaplacian_matrix(u.grid) @ u.values - np.asarray(power5.g_eps(0.25, u.values))
    np.testing.assert_allclose(regularized.values, expected_eps, rtol=0.0, atol=1e-12)


@pytest.mark.energy
def test_reduced_energy_outside_positive_set(gaussian5, log5, power5):
    assert reduced_energy(gaussian5, log5) is None
    assert reduced_energy(gaussian5, power5) is None
    assert reduced_state(gaussian5, log5) is None
    assert reduced_energy(0.0 * gaussian5, log5) is None


@pytest.mark.energy
def test_reduced_energy_rejects_bad_epsilon(gaussian5, log5):
    with pytest.raises(NonlinearityError):
        reduced_energy(gaussian5, log5, 1.5)
    with pytest.raises(NonlinearityError):
        energy(gaussian5, log5, 0.0)


@pytest.mark.energy
def test_reduced_energy_is_positive(gaussian5, log5, power5):
    assert reduced_energy(20.0 * gaussian5, log5) > 0
    assert reduced_energy(16.0 * gaussian5, power5) > 0


@pytest.mark.energy
@pytest.mark.parametrize("model", ["log", "power_mass"])
@pytest.mark.parametrize("seed", range(4))
def test_reduced_energy_is_dilation_invariant(wide_grid, model, seed, validator):
    nl = Logarithmic(5) if model == "log" else PowerMass(5)
    rng = np.random.default_rng(seed)
    u = _into_positive_set(random_smooth_field(wide_grid, rng), nl)
    base = reduced_energy(u, nl)
    for scale in (0.5, 2.0):
        moved = reduced_energy(dilate(u, scale), nl)
        validator.assert_close(moved, base, rel=1e-6, label=f"E(u({scale} .))")


@pytest.mark.energy
@pytest.mark.parametrize("eps", [None, 0.1])
@pytest.mark.parametrize("model", ["log", "power_mass"])
def test_reduced_gradient_matches_finite_differences(grid5, model, eps):
    nl = Logarithmic(5) if model == "log" else PowerMass(5)
    rng = np.random.default_rng(7)
    lap = laplacian_matrix(grid5)
    step = 1e-4
    for _ in range(5):
        u = 2.0 * _into_positive_set(random_smooth_field(grid5, rng), nl, eps)
        v = random_smooth_field(grid5, rng)
        state = reduced_state(u, nl, eps)
        lap_u = lap @ u.values
        lap_v = lap @ v.values
        stiffness = grid5.integrate(lap_u * lap_v)
        load = grid5.integrate(state.forcing * v.values)
        directional = state.gradient_factor * (stiffness - load)
        scale = state.gradient_factor * (abs(stiffness) + abs(load))

        forward = reduced_energy(u + step * v, nl, eps)
        backward = reduced_energy(u - step * v, nl, eps)
        numeric = (forward - backward) / (2 * step)
        assert abs(numeric - directional) <= 1e-5 * scale, (numeric, directional)


@pytest.mark.energy
def test_reduced_state_pieces(gaussian5, power5, validator):
    u = 16.0 * gaussian5
    state = reduced_state(u, power5)
    parts = energy(u, power5)
    validator.assert_close(state.bilap_sq, parts.bilap_sq, rel=1e-14, label="bilap_sq")
    validator.assert_close(state.G_int, parts.G_int, rel=1e-14, label="G_int")
    validator.assert_close(state.scale**4, 10.0 * parts.G_int / parts.bilap_sq, rel=1e-12, label="r^4")
    validator.assert_close(state.energy, reduced_energy(u, power5), rel=1e-14, label="E")
    validator.assert_close(state.gradient_factor, state.energy * 5 / (2 * state.bilap_sq), rel=1e-14, label="factor")


@pytest.mark.energy
@pytest.mark.parametrize("eps", [None, 0.1])
@pytest.mark.parametrize("model", ["log", "power_mass"])
def test_l2_gradient_matches_finite_differences_of_J(grid5, model, eps):
    nl = Logarithmic(5) if model == "log" else PowerMass(5)
    rng = np.random.default_rng(11)
    step = 1e-4
    for _ in range(5):
        u = 4.0 * random_smooth_field(grid5, rng)
        v = random_smooth_field(grid5, rng)
        grad = l2_gradient(u, nl, eps)
        directional = grid5.integrate(grad.values * v.values)
        bilap = bilaplacian_matrix(grid5) @ u.values
        scale = abs(grid5.integrate(bilap * v.values)) + abs(grid5.integrate(np.asarray(nl.g_eps(eps, u.values)) * v.values))

        forward = energy(u + step * v, nl, eps).J_value
        backward = energy(u - step * v, nl, eps).J_value
        numeric = (forward - backward) / (2 * step)
        assert abs(numeric - directional) <= 1e-6 * scale, (numeric, directional)
