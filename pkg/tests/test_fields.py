import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from pauli_weakbind.fields import (ProfileError, RadialProfile, azimuthal_potential, flux,
                                   profile_from_arrays, setup, uniform_setup, xi)

B2 = RadialProfile.constant(2.0, 1.0)


@st.composite
def profiles(draw, kind="magnetic"):
    n = draw(st.integers(1, 4))
    gaps = draw(st.lists(st.floats(0.1, 1.0), min_size=n, max_size=n))
    bp = np.concatenate(([0.0], np.cumsum(gaps)))
    coeffs = [draw(st.lists(st.floats(-3.0, 3.0), min_size=1, max_size=3)) for _ in range(n)]
    return profile_from_arrays(bp, coeffs, kind)


def test_flux_examples():
    assert flux(B2) == pytest.approx(1.0, rel=1e-14)
    assert flux(RadialProfile.constant(3.0, 1.0)) == pytest.approx(1.5, rel=1e-14)
    dipole = RadialProfile((0.0, 1.0, math.sqrt(2.0)), ((2.0,), (-2.0,)))
    assert abs(flux(dipole)) <= 1e-14


def test_azimuthal_potential_examples():
    assert azimuthal_potential(B2, 0.5) == pytest.approx(0.5, rel=1e-14)
    assert azimuthal_potential(B2, 2.0) == pytest.approx(0.5, rel=1e-14)
    r = 1e-6
    assert azimuthal_potential(B2, r) == pytest.approx(r, rel=1e-12)


def test_xi_examples():
    assert xi(B2, 0.5) == pytest.approx(0.375, rel=1e-14)
    assert xi(B2, math.e) == pytest.approx(-1.0, rel=1e-14)
    assert abs(xi(B2, 1.0 - 1e-12)) < 1e-11 and abs(xi(B2, 1.0 + 1e-12)) < 1e-11


@pytest.mark.parametrize("phi, N, Nprime, frac", [
    (1.0, 0, 2, 0.0), (2.5, 2, 3, 0.5), (0.0, 0, 2, 0.0), (1.5, 1, 2, 0.5), (-2.5, 2, 3, 0.5),
    (3.0, 2, 4, 0.0), (0.3, 0, 1, 0.3)])
def test_setup_counts(phi, N, Nprime, frac):
    s = uniform_setup(2.0 * phi)
    assert (s.N, s.Nprime) == (N, Nprime)
    assert s.mu_frac == pytest.approx(frac, abs=1e-12)
    assert s.R == 2.0


def test_integer_flux_tolerance(caplog):
    near = setup(RadialProfile.constant(2.0 + 1e-10, 1.0), RadialProfile.constant(1.0, 1.0))
    assert near.integer_flux and near.flux_class == 1.0
    with caplog.at_level(logging.WARNING):
        s = setup(RadialProfile.constant(2.0 + 1e-7, 1.0), RadialProfile.constant(1.0, 1.0))
    assert not s.integer_flux
    assert "within" in caplog.text


def test_envelope_radius_uses_both_supports():
    s = setup(RadialProfile.constant(2.0, 1.0), RadialProfile.constant(1.0, 3.0))
    assert s.R == 6.0


@pytest.mark.parametrize("bp, coeffs, needle", [
    ((0.0, 1.0, 0.5), ((1.0,), (1.0,)), "breakpoint 2 (0.5)"),
    ((0.0, 1.0, 1.0), ((1.0,), (1.0,)), "breakpoint 2 (1.0)"),
    ((0.1, 1.0), ((1.0,),), "first breakpoint"),
    ((0.0, 1.0), ((1.0,), (2.0,)), "coefficient lists"),
    ((0.0, 1.0), ((),), "no coefficients"),
    ((0.0, math.inf), ((1.0,),), "not finite"),
])
def test_invalid_profiles_name_the_problem(bp, coeffs, needle):
    with pytest.raises(ProfileError, match=needle.replace("(", r"\(").replace(")", r"\)")):
        RadialProfile(bp, coeffs)


def test_profile_vanishes_outside_support():
    p = RadialProfile((0.0, 0.5, 1.0), ((1.0, 2.0), (3.0, -1.0, 0.5)))
    assert p(0.25) == pytest.approx(1.5)
    assert p(0.75) == pytest.approx(3.0 - 0.75 + 0.5 * 0.75**2)
    assert np.all(p(np.array([1.0, 2.0, 50.0])) == 0.0)


@settings(max_examples=40, deadline=None)
@given(profiles(), st.floats(0.05, 6.0))
def test_moments_match_quadrature(B, r):
    pts = [p for p in B.breakpoints if p < r]
    ref = integrate.quad(lambda x: B(x) * x, 0.0, r, points=pts[1:] or None, epsabs=1e-13,
                         epsrel=1e-12, limit=200)[0]
    assert float(B.moment(r, 1.0)) == pytest.approx(ref, rel=1e-9, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(profiles())
def test_xi_exterior_and_linearity(B):
    phi = flux(B)
    for r in (B.support_radius, 2.0 * B.support_radius, 37.0):
        assert abs(xi(B, r) + phi * math.log(r)) <= 1e-12 * (1.0 + abs(phi * math.log(r))) + 1e-14
    assert flux(-B) == pytest.approx(-phi, abs=1e-15)
    rs = np.linspace(0.05, 1.5 * B.support_radius, 13)
    np.testing.assert_allclose(xi(-B, rs), -xi(B, rs), rtol=1e-14, atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(profiles())
def test_xi_derivative_is_minus_b(B):
    h = 1e-6
    cuts = np.array(B.breakpoints)
    rs = np.linspace(0.07, 1.3 * B.support_radius, 23)
    rs = rs[np.min(np.abs(rs[:, None] - cuts[None, :]), axis=1) > 10 * h]
    d = (xi(B, rs + h) - xi(B, rs - h)) / (2 * h)
    assert np.max(np.abs(d + azimuthal_potential(B, rs))) <= 1e-6


@settings(max_examples=40, deadline=None)
@given(profiles())
def test_log_weighted_norm_finite(B):
    assert math.isfinite(B.log_weighted_l1())
    ref = integrate.quad(lambda x: abs(B(x)) * (1.0 + max(-math.log(x), 0.0)) * x, 0.0,
                         B.support_radius, points=list(B.breakpoints[1:-1]) or None,
                         limit=200)[0]
    assert B.log_weighted_l1() == pytest.approx(ref, rel=1e-6, abs=1e-10)
