# tests/radial_operators/test_radial_operators.py
import math

import numpy as np
import pytest

from helpers import (
    FieldError,
    GridError,
    RadialField,
    bilaplacian,
    build_grid,
    dilate,
    field_from_function,
    laplacian,
    norms,
    radial_derivative,
    unit_gaussian,
)
from helpers.radial_operators import laplacian_matrix

GAUSSIAN_EXPECTED = "gaussian_n5.json"
NOT_NORMS = ("log_model", "classical_lsi", "interpolation", "biharmonic_lsi_bound_constant")


def _gaussian_profile(N):
    return lambda r: math.pi ** (-N / 4.0) * np.exp(-0.5 * r**2)


@pytest.mark.operators
@pytest.mark.parametrize("order", [2, 4])
@pytest.mark.parametrize("dimension", [5, 6, 8])
def test_laplacian_of_r_squared(dimension, order):
    grid = build_grid(dimension, 20.0, 2001, order)
    lap = laplacian(field_from_function(grid, lambda r: r**2))
    inside = grid.r <= 4.0
    np.testing.assert_allclose(lap.values[inside], 2.0 * dimension, rtol=0.0, atol=1e-9)


@pytest.mark.operators
@pytest.mark.parametrize("dimension", [5, 6, 8])
def test_bilaplacian_of_r_fourth(dimension):
    grid = build_grid(dimension, 10.0, 501)
    bilap = bilaplacian(field_from_function(grid, lambda r: r**4))
    inside = grid.r <= 3.0
    expected = 8.0 * dimension * (dimension + 2)
    np.testing.assert_allclose(bilap.values[inside], expected, rtol=1e-6)


@pytest.mark.operators
def test_laplacian_of_gaussian(grid5):
    u = field_from_function(grid5, _gaussian_profile(5))
    exact = (grid5.r**2 - 5.0) * u.values
    inside = grid5.r <= 8.0
    np.testing.assert_allclose(laplacian(u).values[inside], exact[inside], rtol=0.0, atol=1e-7)


@pytest.mark.operators
def test_operator_matrices_are_cached_per_grid():
    assert laplacian_matrix(build_grid(5, 10.0, 201)) is laplacian_matrix(build_grid(5, 10.0, 201))


@pytest.mark.operators
def test_radial_derivative_of_gaussian(gaussian5):
    grid = gaussian5.grid
    exact = -grid.r * gaussian5.values
    derivative = radial_derivative(gaussian5)
    np.testing.assert_allclose(derivative[2:-2], exact[2:-2], rtol=0.0, atol=1e-7)


@pytest.mark.operators
def test_gaussian_sobolev_norms(gaussian5, validator, expected_path):
    sobolev = norms(gaussian5)
    actual = {"N": 5, "norms": sobolev._asdict()}
    print("[Operators] Gaussian norms:", actual)
    validator.compare_with_expected(actual, expected_path(GAUSSIAN_EXPECTED), rel_tol=1e-6, ignore_keys=NOT_NORMS)


@pytest.mark.operators
@pytest.mark.parametrize("scale", [0.5, 0.8, 2.0])
def test_dilated_gaussian_matches_closed_form(gaussian5, scale):
    grid = gaussian5.grid
    dilated = dilate(gaussian5, scale)
    exact = math.pi ** (-5 / 4.0) * np.exp(-0.5 * (scale * grid.r) ** 2)
    np.testing.assert_allclose(dilated.values, exact, rtol=0.0, atol=1e-9)


@pytest.mark.operators
@pytest.mark.parametrize("scale", [0.8, 1.25])
def test_dilation_scales_norms(gaussian5, scale, validator):
    base = norms(gaussian5)
    moved = norms(dilate(gaussian5, scale))
    N = 5
    validator.assert_close(moved.l2_sq, scale ** (-N) * base.l2_sq, rel=1e-6, label="int |u|^2")
    validator.assert_close(moved.grad_sq, scale ** (2 - N) * base.grad_sq, rel=1e-6, label="int |grad u|^2")
    validator.assert_close(moved.bilap_sq, scale ** (4 - N) * base.bilap_sq, rel=1e-6, label="int |Delta u|^2")


@pytest.mark.operators
def test_dilation_zeroes_samples_beyond_radius(gaussian5):
    grid = gaussian5.grid
    wide = gaussian5.with_values(np.ones(grid.size))
    squeezed = dilate(wide, 2.0)
    assert np.all(squeezed.values[grid.r > grid.radius / 2.0] == 0.0)
    assert dilate(gaussian5, 1.0) is gaussian5


@pytest.mark.operators
@pytest.mark.parametrize("scale", [0.0, -1.0, float("inf")])
def test_dilation_rejects_bad_scale(gaussian5, scale):
    with pytest.raises(FieldError, match="scale"):
        dilate(gaussian5, scale)


@pytest.mark.operators
def test_field_validation(grid5):
    with pytest.raises(FieldError, match="samples"):
        RadialField(grid5, np.ones(grid5.size + 2))
    values = np.ones(grid5.size)
    values[5] = np.inf
    with pytest.raises(FieldError, match="non-finite"):
        RadialField(grid5, values)


@pytest.mark.operators
def test_field_arithmetic(grid5, gaussian5):
    doubled = gaussian5 + gaussian5
    np.testing.assert_array_equal(doubled.values, (2.0 * gaussian5).values)
    assert (gaussian5 - gaussian5).is_zero()
    assert gaussian5.dot(gaussian5) == pytest.approx(1.0, rel=1e-9)
    with pytest.raises(ValueError):
        gaussian5.values[0] = 0.0
    other = unit_gaussian(build_grid(5, 20.0, 1001))
    with pytest.raises(GridError, match="incompatible"):
        gaussian5 + other
