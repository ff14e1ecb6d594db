import math

import pytest
from hypothesis import assume, given, strategies as st

from su11ep.errors import RegimeError
from su11ep.model import (
    ModelParams, Regime, effective_frequency, eta_from_g, potential_profile,
)

# closed-form values fixed before implementation
SQRT_069 = 0.8306623862918075
ETA_03 = 0.30951960420311175  # asinh(0.3/sqrt(0.91)), also atanh(0.3)


@pytest.mark.parametrize("g, regime, value", [
    (0.0, Regime.BELOW_EP, 1.0),
    (1.0, Regime.AT_EP, 0.0),
    (0.6, Regime.BELOW_EP, 0.8),
    (1.3, Regime.ABOVE_EP, SQRT_069),
])
def test_effective_frequency_examples(g, regime, value):
    ef = effective_frequency(ModelParams(1.0, g))
    assert ef.regime is regime
    assert ef.value == pytest.approx(value, abs=1e-15)


def test_at_ep_window_is_relative():
    assert effective_frequency(ModelParams(2.0, 2.0015)).regime is Regime.AT_EP
    assert effective_frequency(ModelParams(2.0, 2.003)).regime is Regime.ABOVE_EP


@pytest.mark.parametrize("g, eta", [(0.0, 0.0), (0.6, math.log(2.0)), (0.3, ETA_03)])
def test_eta_examples(g, eta):
    assert eta_from_g(ModelParams(1.0, g)) == pytest.approx(eta, abs=1e-15)


def test_eta_closed_form_of_quoted_value():
    assert math.asinh(0.3 / math.sqrt(0.91)) == pytest.approx(ETA_03, abs=1e-15)


@pytest.mark.parametrize("g", [1.0, 1.5])
def test_eta_rejects_ep_and_above(g):
    with pytest.raises(RegimeError):
        eta_from_g(ModelParams(1.0, g))


@pytest.mark.parametrize("kwargs", [
    dict(omega=0.0), dict(omega=-1.0), dict(g=-0.1), dict(truncation=3), dict(tol=0.0),
    dict(truncation=4.5), dict(omega=float("nan")),
])
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        ModelParams(**kwargs)


@pytest.mark.parametrize("g, x, v", [(1.0, 2.0, 0.0), (0.0, 1.0, -0.5), (0.6, 1.0, -0.4)])
def test_potential_examples(g, x, v):
    [(x_out, v_out)] = potential_profile(ModelParams(1.0, g), [x])
    assert x_out == x
    assert v_out == pytest.approx(v, abs=1e-15)


def test_potential_squared_convention():
    [(_, v)] = potential_profile(ModelParams(1.0, 0.6), [1.0], convention="squared")
    assert v == pytest.approx(-0.32)


omegas = st.floats(0.1, 10.0)


@given(omegas, st.floats(0.0, 0.999))
def test_sinh_eta_identity(omega, ratio):
    p = ModelParams(omega, ratio * omega)
    eta = eta_from_g(p)
    assert eta >= 0
    assert math.sinh(eta) * math.sqrt(omega ** 2 - p.g ** 2) == pytest.approx(p.g, abs=1e-12 * omega)


@given(omegas, st.floats(0.0, 3.0))
def test_value_squared_is_gap(omega, ratio):
    p = ModelParams(omega, ratio * omega)
    ef = effective_frequency(p)
    if ef.regime is not Regime.AT_EP:
        assert ef.value ** 2 == pytest.approx(abs(omega ** 2 - p.g ** 2), rel=1e-12)


@given(omegas, st.floats(0.0, 0.99), st.floats(0.0, 0.99))
def test_monotone_below_ep(omega, a, b):
    assume(a < b)
    fa = effective_frequency(ModelParams(omega, a * omega)).value
    fb = effective_frequency(ModelParams(omega, b * omega)).value
    assert fb <= fa


@given(omegas, st.floats(1.01, 3.0), st.floats(1.01, 3.0))
def test_monotone_above_ep(omega, a, b):
    assume(a < b)
    fa = effective_frequency(ModelParams(omega, a * omega)).value
    fb = effective_frequency(ModelParams(omega, b * omega)).value
    assert fb >= fa


@given(omegas, st.floats(0.0, 3.0), st.floats(0.1, 5.0))
def test_curvature_sign(omega, ratio, x):
    p = ModelParams(omega, ratio * omega)
    [(_, v)] = potential_profile(p, [x])
    [(_, vm)] = potential_profile(p, [-x])
    assert v == vm
    expected = {Regime.BELOW_EP: -1, Regime.AT_EP: 0, Regime.ABOVE_EP: 1}[effective_frequency(p).regime]
    assert (v > 0) - (v < 0) == expected
