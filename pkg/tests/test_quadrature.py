import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pauli_weakbind.quadrature import CumulativeIntegral, integrate, integrate_panels, panel_edges


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=30), st.floats(0.0, 2.0),
       st.floats(0.1, 3.0))
def test_gauss_rule_exact_for_polynomials(c, a, w):
    b = a + w
    P = np.polynomial.Polynomial(c)
    ref = P.integ()(b) - P.integ()(a)
    assert integrate(lambda x: P(x), a, b) == pytest.approx(ref, rel=1e-11, abs=1e-11)


def test_panel_edges_grade_towards_origin():
    e = panel_edges([0.0, 1.0, 2.0], per_piece=8)
    assert e[0] == 0.0 and e[1] == pytest.approx(2.0**-8)
    assert 1.0 in e and e[-1] == 2.0


@given(st.floats(0.011, 2.9))
def test_cumulative_and_upper_add_up(r):
    f = lambda x: np.cos(x) * x
    c = CumulativeIntegral(f, panel_edges([0.0, 1.0, 3.0], 12))
    F = lambda x: np.cos(x) + x * np.sin(x) - 1.0
    assert float(c(r)) == pytest.approx(F(r), abs=1e-13)
    assert float(c.upper(r)) == pytest.approx(F(3.0) - F(r), abs=1e-13)


def test_upper_integral_has_no_cancellation():
    # ∫_r^1 ρ^-7 dρ with the panel range starting at 1e-4, where the integrand is 1e28
    edges = np.geomspace(1e-4, 1.0, 200)
    c = CumulativeIntegral(lambda x: x**-7.0, edges)
    r = 0.5
    assert float(c.upper(r)) == pytest.approx((r**-6 - 1.0) / 6.0, rel=1e-12)
    assert integrate_panels(lambda x: x**-7.0, edges) == pytest.approx(c.total, rel=1e-14)
