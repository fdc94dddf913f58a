# tests/nonlinearity/test_nonlinearity.py
import math

import numpy as np
import pytest

from helpers import (
    Logarithmic,
    Nonlinearity,
    NonlinearityError,
    PowerMass,
    check_growth_conditions,
    eval_G,
    eval_G_eps,
    eval_g,
    eval_phi_eps,
    make_nonlinearity,
)

SAMPLES = np.array([-1.2, -0.4, 0.05, 0.3, 0.6, 1.1, 1.7])
EPSILONS = [0.5, 0.1, 0.01]


class NegativeQuadratic(Nonlinearity):
    """G(s) = -s^2: never positive, so (g2) fails."""

    name = "negative_quadratic"

    def G(self, s):
        return -np.asarray(s, dtype=float) ** 2

    def g(self, s):
        return -2.0 * np.asarray(s, dtype=float)


def _models():
    return [Logarithmic(5), PowerMass(5, p=4.0, mu=1.0), PowerMass(6, p=3.5, mu=0.5), Logarithmic(8)]


@pytest.mark.nonlinearity
def test_log_model_values(log5, validator):
    b = math.exp(-0.5)
    assert log5.sign_change == pytest.approx(b)
    validator.assert_close(eval_G(log5, b), -0.5 / math.e, rel=1e-14, label="G(e^-1/2)")
    validator.assert_close(eval_g(log5, b), 0.0, abs_tol=1e-15, label="g(e^-1/2)")
    assert eval_G(log5, 0.0) == 0.0
    assert eval_g(log5, 0.0) == 0.0
    assert eval_G(log5, 1.0) == 0.0
    assert eval_G(log5, 2.0) == pytest.approx(4.0 * math.log(2.0))
    assert eval_g(log5, -2.0) == pytest.approx(-(4.0 * math.log(2.0) + 2.0))


@pytest.mark.nonlinearity
def test_power_mass_values(power5):
    assert power5.sign_change == pytest.approx(1.0)
    assert power5.G(2.0) == pytest.approx(16.0 / 4.0 - 2.0)
    assert power5.g(-2.0) == pytest.approx(-(8.0 - 2.0))
    assert PowerMass(5, p=3.0, mu=4.0).sign_change == pytest.approx(4.0)
    assert power5.describe() == {"model": "power_mass", "N": 5, "p": 4.0, "mu": 1.0}


@pytest.mark.nonlinearity
@pytest.mark.parametrize("nl", _models(), ids=lambda nl: f"{nl.name}-N{nl.dimension}")
def test_g_is_derivative_of_G(nl):
    step = 1e-6
    s = SAMPLES
    numeric = (np.asarray(nl.G(s + step)) - np.asarray(nl.G(s - step))) / (2 * step)
    np.testing.assert_allclose(numeric, nl.g(s), rtol=1e-6, atol=1e-8)


@pytest.mark.nonlinearity
@pytest.mark.parametrize("nl", _models(), ids=lambda nl: f"{nl.name}-N{nl.dimension}")
def test_split_identities(nl):
    s = np.linspace(-3.0, 3.0, 601)
    G_plus = np.asarray(nl.G_plus(s))
    G_minus = np.asarray(nl.G_minus(s))
    assert np.all(G_plus >= 0)
    assert np.all(G_minus >= -1e-15)
    np.testing.assert_allclose(G_plus - G_minus, nl.G(s), rtol=0.0, atol=1e-12)
    np.testing.assert_allclose(np.asarray(nl.g_plus(s)) - np.asarray(nl.g_minus(s)), nl.g(s), atol=1e-12)
    # g_+ carries the sign of s, g_- the opposite one
    assert np.all(np.asarray(nl.g_plus(s)) * s >= 0)
    assert np.all(np.asarray(nl.g_minus(s)) * s >= 0)


@pytest.mark.nonlinearity
@pytest.mark.parametrize("nl", _models(), ids=lambda nl: f"{nl.name}-N{nl.dimension}")
def test_closed_form_G_plus_matches_quadrature(nl):
    closed = np.asarray(nl.G_plus(SAMPLES))
    quadrature = np.asarray(Nonlinearity.G_plus(nl, SAMPLES))
    np.testing.assert_allclose(closed, quadrature, rtol=0.0, atol=1e-9)


@pytest.mark.nonlinearity
@pytest.mark.parametrize("eps", EPSILONS)
@pytest.mark.parametrize("nl", _models(), ids=lambda nl: f"{nl.name}-N{nl.dimension}")
def test_closed_form_G_minus_eps_matches_quadrature(nl, eps):
    closed = np.asarray(nl.G_minus_eps(eps, SAMPLES))
    quadrature = np.asarray(Nonlinearity.G_minus_eps(nl, eps, SAMPLES))
    np.testing.assert_allclose(closed, quadrature, rtol=0.0, atol=1e-9)


@pytest.mark.nonlinearity
def test_phi_eps_cutoff(log5):
    q = log5.critical_exponent - 1.0
    assert eval_phi_eps(log5, 0.1, 0.0) == 0.0
    assert eval_phi_eps(log5, 0.1, 0.1) == pytest.approx(1.0)
    assert eval_phi_eps(log5, 0.1, -0.3) == 1.0
    assert eval_phi_eps(log5, 0.1, 0.05) == pytest.approx(0.5**q)
    values = np.asarray(log5.phi_eps(0.2, np.linspace(0.0, 1.0, 101)))
    assert np.all(np.diff(values) >= 0)
    assert np.all((values >= 0) & (values <= 1))


@pytest.mark.nonlinearity
@pytest.mark.parametrize("nl", _models(), ids=lambda nl: f"{nl.name}-N{nl.dimension}")
def test_regularization_bounds_and_limit(nl):
    s = SAMPLES
    G = np.asarray(nl.G(s))
    gaps = []
    for eps in (0.5, 0.25, 0.1, 0.01, 1e-3, 1e-5):
        G_eps = np.asarray(nl.G_eps(eps, s))
        assert np.all(G_eps >= G - 1e-12)
        gaps.append(np.max(G_eps - G))
    assert all(later <= earlier + 1e-12 for earlier, later in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-8
    np.testing.assert_array_equal(nl.G_eps(None, s), G)
    np.testing.assert_array_equal(nl.g_eps(None, s), nl.g(s))


@pytest.mark.nonlinearity
@pytest.mark.parametrize("eps", EPSILONS)
@pytest.mark.parametrize("nl", _models(), ids=lambda nl: f"{nl.name}-N{nl.dimension}")
def test_g_eps_is_derivative_of_G_eps(nl, eps):
    step = 1e-7
    s = SAMPLES
    numeric = (np.asarray(nl.G_eps(eps, s + step)) - np.asarray(nl.G_eps(eps, s - step))) / (2 * step)
    np.testing.assert_allclose(numeric, nl.g_eps(eps, s), rtol=1e-5, atol=1e-7)


@pytest.mark.nonlinearity
def test_dg_eps_matches_closed_derivative(log5, power5):
    assert log5.dg_eps(None, 2.0) == pytest.approx(2.0 * math.log(2.0) + 3.0, rel=1e-6)
    assert power5.dg_eps(None, 2.0) == pytest.approx(3.0 * 4.0 - 1.0, rel=1e-6)


@pytest.mark.nonlinearity
def test_scalar_and_array_evaluation_agree(log5):
    array = np.asarray(eval_G_eps(log5, 0.1, SAMPLES))
    scalars = [eval_G_eps(log5, 0.1, float(s)) for s in SAMPLES]
    assert all(isinstance(value, float) for value in scalars)
    np.testing.assert_allclose(array, scalars, rtol=1e-13)


@pytest.mark.nonlinearity
@pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 2.0])
def test_regularization_level_outside_unit_interval(log5, eps):
    with pytest.raises(NonlinearityError, match=r"\(0, 1\)"):
        eval_G_eps(log5, eps, 0.5)
    with pytest.raises(NonlinearityError):
        log5.phi_eps(eps, 0.5)


@pytest.mark.nonlinearity
@pytest.mark.parametrize(
    "factory, message",
    [
        (lambda: Logarithmic(4), "dimension"),
        (lambda: PowerMass(5, p=2.0), "2 < p"),
        (lambda: PowerMass(5, p=10.0), "2 < p"),
        (lambda: PowerMass(8, p=4.0), "2 < p"),
        (lambda: PowerMass(5, p=4.0, mu=0.0), "mass"),
        (lambda: make_nonlinearity("cubic", 5), "unknown nonlinearity"),
    ],
)
def test_invalid_models(factory, message):
    with pytest.raises(NonlinearityError, match=message):
        factory()


@pytest.mark.nonlinearity
@pytest.mark.parametrize(
    "name, expected",
    [("log", Logarithmic), ("Logarithmic", Logarithmic), ("power_mass", PowerMass), ("POWER", PowerMass)],
)
def test_make_nonlinearity_aliases(name, expected):
    assert isinstance(make_nonlinearity(name, 6), expected)


@pytest.mark.nonlinearity
def test_make_nonlinearity_parameters():
    nl = make_nonlinearity("power_mass", 8, p=3.0, mu=2.0)
    assert nl.parameters() == {"p": 3.0, "mu": 2.0}
    assert make_nonlinearity("power_mass", 5).parameters() == {"p": 4.0, "mu": 1.0}


@pytest.mark.nonlinearity
def test_growth_conditions_hold_for_built_in_models(log5, power5):
    step = 10.0 ** (16.0 / 999.0)
    log_report = check_growth_conditions(log5)
    assert log_report.ok, log_report.violations
    assert 1.0 < log_report.xi0 <= step
    assert log_report.G_at_xi0 > 0

    power_report = check_growth_conditions(power5)
    assert power_report.ok, power_report.violations
    assert math.sqrt(2.0) < power_report.xi0 <= math.sqrt(2.0) * step
    assert power_report.g1_ratio_near_zero < 1e-3
    assert power_report.g3_ratio_near_infinity < 1e-3
    assert power_report.to_dict()["label"] == "diagnostic"


@pytest.mark.nonlinearity
def test_growth_conditions_flag_missing_positive_part():
    report = check_growth_conditions(NegativeQuadratic(5), sample_count=100)
    assert not report.ok
    assert report.xi0 is None
    assert any("(g2)" in message for message in report.violations)


@pytest.mark.nonlinearity
def test_growth_conditions_need_enough_samples(log5):
    with pytest.raises(NonlinearityError, match="sample count"):
        check_growth_conditions(log5, sample_count=10)
