# tests/radial_grid/test_radial_grid.py
import math

import numpy as np
import pytest

from helpers import GridError, build_grid, integrate, refine, sphere_area, unit_gaussian


@pytest.mark.radial_grid
@pytest.mark.parametrize(
    "dimension, expected",
    [
        (5, 8.0 * math.pi**2 / 3.0),
        (6, math.pi**3),
        (8, math.pi**4 / 3.0),
    ],
)
def test_sphere_area(dimension, expected, validator):
    validator.assert_close(sphere_area(dimension), expected, rel=1e-14, label=f"omega_{dimension}")


@pytest.mark.radial_grid
def test_default_grid_layout(grid5):
    assert grid5.describe() == {"N": 5, "R": 20.0, "n": 2001, "order": 4}
    assert grid5.r[0] == 0.0
    assert grid5.r[-1] == pytest.approx(20.0)
    assert grid5.spacing == pytest.approx(0.01)
    assert grid5.critical_exponent == 10.0
    assert grid5.weights[0] == 0.0
    assert np.all(grid5.weights[1:] > 0)


@pytest.mark.radial_grid
def test_nodes_are_read_only(grid5):
    with pytest.raises(ValueError):
        grid5.r[3] = 1.0
    with pytest.raises(ValueError):
        grid5.weights[3] = 1.0


@pytest.mark.radial_grid
@pytest.mark.parametrize("dimension", [5, 6, 8])
def test_constant_integrates_to_ball_volume(dimension, validator):
    grid = build_grid(dimension, 3.0, 601)
    volume = sphere_area(dimension) * 3.0**dimension / dimension
    validator.assert_close(integrate(grid, np.ones(grid.size)), volume, rel=1e-9, label="ball volume")


@pytest.mark.radial_grid
@pytest.mark.parametrize("dimension", [5, 6, 8])
def test_unit_gaussian_has_unit_mass(dimension, validator):
    grid = build_grid(dimension)
    u = unit_gaussian(grid)
    validator.assert_close(grid.integrate(u.values**2), 1.0, rel=1e-9, label="||u||^2")


@pytest.mark.radial_grid
def test_refine_halves_spacing():
    grid = build_grid(6, 12.0, 401, order=2)
    fine = refine(grid)
    assert fine.size == 801
    assert fine.radius == grid.radius
    assert fine.order == 2
    assert fine.dimension == 6
    assert fine.spacing == pytest.approx(grid.spacing / 2)


@pytest.mark.radial_grid
def test_equal_grids_compare_and_hash_equal():
    a = build_grid(5, 10.0, 101)
    b = build_grid(5, 10.0, 101)
    assert a == b
    assert hash(a) == hash(b)
    assert a != build_grid(5, 10.0, 103)


@pytest.mark.radial_grid
@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"N": 4}, "dimension"),
        ({"N": 3}, "dimension"),
        ({"N": 5, "R": 0.0}, "radius"),
        ({"N": 5, "R": -2.0}, "radius"),
        ({"N": 5, "n": 7}, "node count"),
        ({"N": 5, "n": 2000}, "odd"),
        ({"N": 5, "order": 3}, "order"),
    ],
)
def test_invalid_grid_parameters(kwargs, message):
    with pytest.raises(GridError, match=message):
        build_grid(**kwargs)


@pytest.mark.radial_grid
def test_integrate_rejects_bad_samples():
    grid = build_grid(5, 10.0, 101)
    with pytest.raises(GridError, match="does not match"):
        grid.integrate(np.ones(grid.size - 1))
    samples = np.ones(grid.size)
    samples[17] = np.nan
    with pytest.raises(GridError, match="node 17"):
        grid.integrate(samples)


@pytest.mark.radial_grid
def test_trapezoid_weights_agree_with_simpson_on_smooth_fields(grid5, gaussian5, validator):
    weights = grid5.trapezoid_weights
    assert not weights.flags.writeable
    assert weights[0] == 0.0
    # smooth r^(N-1) profile away from the ends: no 4/3, 2/3 alternation
    ratio = weights[1000:1004] / grid5.r[1000:1004] ** 4
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)
    mass = float(np.dot(weights, gaussian5.values**2))
    validator.assert_close(mass, 1.0, rel=1e-9, label="trapezoid mass of the unit Gaussian")
    validator.assert_close(mass, grid5.integrate(gaussian5.values**2), rel=2e-9, label="trapezoid vs Simpson")
