import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from pauli_weakbind.channels import (BOUNDED_VIRTUAL, EXPONENTIAL, L2_EIGENMODE, LINEAR, LOG,
                                     LOG_GROWING, POWER, POWER_GROWING, Channel,
                                     channel_potential, classify, mode_coefficients, regime_for,
                                     virtual_channels, zero_mode)
from pauli_weakbind.fields import RadialProfile, profile_from_arrays, setup, uniform_setup

PHI1_V0 = (math.e - 1.0) / 2.0


@st.composite
def field_setups(draw):
    n = draw(st.integers(1, 3))
    gaps = draw(st.lists(st.floats(0.2, 1.0), min_size=n, max_size=n))
    bp = np.concatenate(([0.0], np.cumsum(gaps)))
    vals = draw(st.lists(st.floats(-4.0, 6.0), min_size=n, max_size=n))
    B = profile_from_arrays(bp, [[v] for v in vals], "magnetic")
    V = RadialProfile.constant(1.0, float(bp[-1]) * draw(st.floats(0.5, 1.0)), "electric")
    return setup(B, V)


def test_channel_parse_and_conjugate():
    assert Channel.parse("-1,-") == Channel(-1, -1)
    assert Channel.parse(" 2, +") == Channel(2, 1)
    assert Channel(2, 1).conjugate() == Channel(-2, -1)
    assert str(Channel(0, -1)) == "(0,-)"
    with pytest.raises(ValueError):
        Channel(0, 0)
    with pytest.raises(ValueError):
        Channel.parse("1,x")


def test_regime_tags():
    assert [regime_for(m) for m in (0.0, 0.5, 1.0, 2.5)] == [EXPONENTIAL, POWER, LOG, LINEAR]


def test_channel_potential_examples(setups):
    pot = channel_potential(setups[1.0], Channel(0, -1))
    assert pot.W(0.5) == pytest.approx(-1.75, rel=1e-14)
    assert pot.W(2.0) == pytest.approx(0.25, rel=1e-14)
    assert channel_potential(setups[1.0], Channel(-1, -1)).tail_mu == 0.0
    # centrifugal behaviour at the origin
    p3 = channel_potential(setups[1.0], Channel(3, 1))
    r = 1e-4
    assert r * r * p3.W(r) == pytest.approx(9.0, rel=1e-6)


@settings(max_examples=25, deadline=None)
@given(field_setups(), st.integers(-4, 4), st.sampled_from([1, -1]))
def test_exterior_potential_is_exact(s, m, spin):
    pot = channel_potential(s, Channel(m, spin))
    assert pot.tail_mu == pytest.approx(abs(m + s.flux_class))
    r = np.linspace(s.R, 5 * s.R, 9)
    assert np.all(pot.W(r) == pot.tail_mu**2 / r**2)


def test_zero_mode_examples(setups):
    w = zero_mode(setups[1.0], Channel(0, -1))
    assert w(1e-9) == pytest.approx(math.exp(0.5), rel=1e-12)
    r = np.array([1.0, 2.0, 7.5])
    np.testing.assert_allclose(w(r), 1.0 / r, rtol=1e-13)
    for spin in (1, -1):
        w0 = zero_mode(setups[0.0], Channel(0, spin))
        np.testing.assert_allclose(w0(np.array([1e-5, 0.3, 1.0, 9.0])), 1.0, rtol=1e-14)


def test_integral_zero_mode_against_quadrature(setups):
    # Φ = 1, m = 1, spin -: ω ∝ r^-1 e^ξ ∫_0^r e^{-2ξ} ρ dρ; values below from
    # adaptive quadrature, normalised to 1 at R = 2
    w = zero_mode(setups[1.0], Channel(1, -1))
    assert w.decay_class == POWER_GROWING
    expected = {0.3: 0.0895316856382134, 1.0: 0.3109253259371823, 2.0: 1.0,
                7.0: 12.052303534203837}
    for r, val in expected.items():
        assert w(r) == pytest.approx(val, rel=1e-10)


def test_mode_coefficients_examples(setups):
    s = setups[1.0]
    w = zero_mode(s, Channel(0, -1))
    assert w.v_coeff == pytest.approx(PHI1_V0, rel=1e-12)
    assert mode_coefficients(s, w) == (pytest.approx(PHI1_V0, rel=1e-12), math.inf)
    flat = setup(s.B, RadialProfile.zero(1.0, "electric"))
    assert zero_mode(flat, Channel(0, -1)).v_coeff == 0.0
    # Φ = 2.5, m = 0: ω = e^ξ with ξ = 5(1 - r²)/4 inside, r^-2.5 outside
    w25 = zero_mode(setups[2.5], Channel(0, -1))
    v25 = (math.exp(2.5) - 1.0) / 5.0
    assert w25.decay_class == L2_EIGENMODE
    assert w25.v_coeff == pytest.approx(v25, rel=1e-12)
    assert w25.norm_sq == pytest.approx(v25 + 1.0 / 3.0, rel=1e-12)
    # Φ = 1.5, m = -1 (ω = r e^ξ): quadrature oracle
    assert zero_mode(setups[1.5], Channel(-1, -1)).v_coeff == pytest.approx(
        0.4403753489640145, rel=1e-12)


@pytest.mark.parametrize("phi, expected", [
    (1.0, [(Channel(0, -1), LOG, 1.0), (Channel(-1, -1), EXPONENTIAL, 0.0)]),
    (1.5, [(Channel(0, -1), LINEAR, 1.5), (Channel(-1, -1), POWER, 0.5)]),
    (0.0, [(Channel(0, 1), EXPONENTIAL, 0.0), (Channel(0, -1), EXPONENTIAL, 0.0)]),
    (2.5, [(Channel(0, -1), LINEAR, 2.5), (Channel(-1, -1), LINEAR, 1.5),
           (Channel(-2, -1), POWER, 0.5)]),
])
def test_virtual_channel_lists(setups, phi, expected):
    got = virtual_channels(setups[phi])
    assert sorted(got) == sorted(expected)


def test_virtual_normalisation(setups):
    for s in setups.values():
        for ch, _, mu in virtual_channels(s):
            w = zero_mode(s, ch)
            r = np.array([s.R, 1.7 * s.R, 12.0 * s.R])
            np.testing.assert_allclose(w(r), r**-mu, rtol=1e-12)


@settings(max_examples=40, deadline=None)
@given(field_setups())
def test_virtual_count_and_conjugation(s):
    vc = virtual_channels(s)
    assert len(vc) == s.Nprime
    assert all(zero_mode(s, ch).is_virtual for ch, _, _ in vc)
    mirrored = sorted((ch.conjugate(), reg, mu) for ch, reg, mu in virtual_channels(s.reflected()))
    assert mirrored == sorted(vc)


@settings(max_examples=40, deadline=None)
@given(field_setups(), st.integers(-5, 5))
def test_spin_minus_classes_follow_two_sided_bounds(s, m):
    phi = s.flux_class
    if phi <= 0:
        return
    decay, _ = classify(s, Channel(m, -1))
    if -phi + 1 < m <= 0:
        assert decay == L2_EIGENMODE
    elif -phi <= m <= min(0, -phi + 1):
        assert decay == BOUNDED_VIRTUAL
    else:
        assert decay in (LOG_GROWING, POWER_GROWING)


def _weak_residual(s, ch, a, b):
    """∫(ω'φ' + Wωφ) r dr for a smooth bump φ on [a, b], and the matching scale."""
    w = zero_mode(s, ch)
    pot = channel_potential(s, ch)
    L = b - a
    phi = lambda r: math.sin(math.pi * (r - a) / L) ** 2
    dphi = lambda r: math.pi / L * math.sin(2.0 * math.pi * (r - a) / L)
    pts = [p for p in s.breakpoints() if a < p < b] or None
    f = lambda r: (w.deriv(r) * dphi(r) + float(pot.W(r)) * w(r) * phi(r)) * r
    g = lambda r: (abs(w.deriv(r) * dphi(r)) + abs(float(pot.W(r)) * w(r) * phi(r))) * r
    scale = integrate.quad(g, a, b, points=pts, limit=200)[0]
    return integrate.quad(f, a, b, points=pts, epsabs=1e-9 * scale, limit=200)[0], scale


@pytest.mark.parametrize("phi", [0.0, 1.0, 1.5, 2.5])
@pytest.mark.parametrize("m", [-3, -2, -1, 0, 1, 2])
@pytest.mark.parametrize("spin", [1, -1])
def test_zero_modes_solve_weak_equation(setups, phi, m, spin):
    s = setups[phi]
    for a, b in ((0.05, 0.6), (0.5, 1.5), (0.9, 3.0)):
        res, scale = _weak_residual(s, Channel(m, spin), a, b)
        assert abs(res) <= 1e-6 * scale


@pytest.mark.parametrize("phi", [1.0, 1.5, 2.5])
@pytest.mark.parametrize("m", range(-4, 4))
@pytest.mark.parametrize("spin", [1, -1])
def test_zero_modes_within_envelopes(setups, phi, m, spin):
    s = setups[phi]
    w = zero_mode(s, Channel(m, spin))
    mu = w.tail_mu
    r = np.geomspace(1e-3, 10 * s.R, 400)
    inner = np.minimum(r, 1.0) ** abs(m)
    if w.decay_class == LOG_GROWING:
        outer = 1.0 + np.log(np.maximum(r, 1.0))
    elif w.decay_class == POWER_GROWING:
        outer = np.maximum(r, 1.0) ** mu
    else:
        outer = np.maximum(r, 1.0) ** -mu
    ratio = w(r) / (inner * outer)
    assert np.all(ratio > 0.0)
    assert ratio.max() / ratio.min() < 1e3
