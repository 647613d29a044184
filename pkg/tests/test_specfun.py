import json
import math
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pauli_weakbind.specfun import BesselOverflowError, bessel_k, c_mu, gamma, kv, log_derivative

ORACLES = json.loads(resources.files("pauli_weakbind").joinpath("data/special_oracles.json")
                     .read_text())


@pytest.mark.parametrize("x, expected", [(p[0], p[1]) for p in ORACLES["gamma"]])
def test_gamma_matches_series_oracle(x, expected):
    assert gamma(float(x)) == pytest.approx(float(expected), rel=1e-12)


@pytest.mark.parametrize("order, x, expected", [tuple(p) for p in ORACLES["bessel_k"]])
def test_bessel_k_matches_series_oracle(order, x, expected):
    assert bessel_k(float(order), float(x)).value == pytest.approx(float(expected), rel=1e-10)


def test_gamma_known_values():
    assert gamma(1.0) == 1.0
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma(1.0 / 3.0) == pytest.approx(2.678938534707747633, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -0.5, -3.0])
def test_gamma_rejects_nonpositive(x):
    with pytest.raises(ValueError):
        gamma(x)


@given(st.floats(0.1, 20.0))
def test_gamma_recurrence(x):
    assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)


def test_half_order_closed_form():
    e = bessel_k(0.5, 1.0)
    assert e.value == pytest.approx(math.sqrt(math.pi / 2.0) * math.exp(-1.0), rel=1e-14)
    assert e.value == pytest.approx(0.461068504447894, rel=1e-12)
    # K_{1/2}' = -(1 + 1/(2x)) K_{1/2}
    assert e.derivative == pytest.approx(-1.5 * e.value, rel=1e-13)


def test_small_argument_behaviour():
    x = 1e-12
    assert bessel_k(0.0, x).value == pytest.approx(-math.log(x / 2.0) - np.euler_gamma, rel=1e-12)
    for mu in (0.3, 1.0, 2.5):
        lead = 0.5 * gamma(mu) * (x / 2.0) ** -mu
        # next term is relatively O((x/2)^(2 min(mu, 1)))
        assert bessel_k(mu, x).value == pytest.approx(lead, rel=1e-6)


def test_overflow_is_reported():
    with pytest.raises(BesselOverflowError):
        bessel_k(10.0, 1e-300)
    with pytest.raises(ValueError):
        bessel_k(10.5, 1.0)
    with pytest.raises(ValueError):
        bessel_k(1.0, 0.0)


@given(st.floats(0.0, 9.0), st.floats(1e-3, 50.0))
def test_bessel_positive_decreasing_and_recurrence(mu, x):
    e = bessel_k(mu, x)
    assert e.value > 0.0 and e.derivative < 0.0
    assert bessel_k(mu, x * 1.01).value < e.value
    km, kp = kv(abs(mu - 1.0), x), kv(mu + 1.0, x)
    assert kp == pytest.approx(km + 2.0 * mu / x * e.value, rel=1e-10)
    assert e.derivative == pytest.approx(-(km + kp) / 2.0, rel=1e-14)


@given(st.floats(0.0, 5.0), st.floats(1e-3, 20.0))
def test_log_derivative_consistent(mu, x):
    e = bessel_k(mu, x)
    assert log_derivative(mu, x) == pytest.approx(x * e.derivative / e.value, rel=1e-11)


@given(st.floats(0.05, 0.95))
def test_c_mu_defining_identity(mu):
    lhs = c_mu(mu) ** mu * gamma(1.0 - mu) / (2.0 ** (2.0 * mu - 1.0) * gamma(mu))
    assert lhs == pytest.approx(1.0, rel=1e-12)


def test_c_mu_values():
    assert abs(c_mu(0.5) - 1.0) <= 1e-14
    third = (2.0 ** (-1.0 / 3.0) * gamma(1.0 / 3.0) / gamma(2.0 / 3.0)) ** 3
    assert c_mu(1.0 / 3.0) == pytest.approx(third, rel=1e-13)
    assert c_mu(1.0 / 3.0) == pytest.approx(3.8716, abs=5e-4)


@pytest.mark.parametrize("mu", [0.0, 1.0, -0.2, 1.5])
def test_c_mu_domain(mu):
    with pytest.raises(ValueError):
        c_mu(mu)


@settings(max_examples=30)
@given(st.floats(0.02, 0.97))
def test_c_mu_continuous(mu):
    # |d ln c_mu / d mu| grows like mu^-2 near 0 (about 1e4 at mu = 0.02)
    assert c_mu(mu + 1e-10) == pytest.approx(c_mu(mu), rel=1e-5)
