import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import special

from pauli_weakbind.asymptotics import (EXP_TRIAL_CONSTANT, DomainError, invert_tlogt,
                                        optimal_kappa, predict_halfline, predict_pauli)
from pauli_weakbind.channels import EXPONENTIAL, LINEAR, LOG, POWER, Channel
from pauli_weakbind.specfun import c_mu

V_PHI1 = (math.e - 1.0) / 2.0


def test_leading_law_examples():
    assert predict_halfline(0.5, 1.0, 0.01).lambda_leading == pytest.approx(-1e-4, rel=1e-14)
    p0 = predict_halfline(0.0, 1.0, 0.1)
    assert p0.lambda_leading == pytest.approx(-math.exp(-20.0), rel=1e-14)
    assert p0.log_abs_lambda == pytest.approx(-20.0, rel=1e-15)
    p1 = predict_halfline(1.0, V_PHI1, 0.01)
    assert p1.lambda_leading == pytest.approx(-2 * 0.01 * V_PHI1 / math.log(100.0), rel=1e-14)
    assert p1.lambda_leading == pytest.approx(-3.7312e-3, rel=1e-4)
    p25 = predict_halfline(2.5, 2.0, 0.01, norm_sq=4.0)
    assert p25.lambda_leading == pytest.approx(-0.005, rel=1e-14)


def test_exponential_law_keeps_log_scale():
    p = predict_halfline(0.0, 0.5, 1e-3)
    assert p.lambda_leading == -0.0
    assert p.log_abs_lambda == pytest.approx(-4000.0)


@pytest.mark.parametrize("mu, regime", [(0.0, EXPONENTIAL), (0.4, POWER), (1.0, LOG),
                                        (1.5, LINEAR), (2.0, LINEAR)])
def test_regime_and_remainder_tags(mu, regime):
    p = predict_halfline(mu, 1.0, 0.01, norm_sq=3.0)
    assert p.regime == regime
    if mu == 2.0:
        assert p.remainder_order == "O(alpha |ln alpha|)"


@pytest.mark.parametrize("kwargs", [dict(mu=0.5, v=0.0, alpha=0.1), dict(mu=0.5, v=-1.0, alpha=0.1),
                                    dict(mu=0.5, v=1.0, alpha=0.0), dict(mu=-0.1, v=1.0, alpha=0.1),
                                    dict(mu=1.0, v=1.0, alpha=1.5),
                                    dict(mu=1.5, v=1.0, alpha=0.1)])
def test_domain_errors(kwargs):
    with pytest.raises(DomainError):
        predict_halfline(**kwargs)


@given(st.sampled_from([0.0, 0.3, 0.5, 0.8, 1.0, 1.7, 3.0]), st.floats(0.05, 5.0),
       st.floats(1e-4, 0.5), st.floats(1.01, 3.0))
def test_prediction_monotone_in_v_and_alpha(mu, v, alpha, factor):
    base = predict_halfline(mu, v, alpha, 2.0)
    assert base.lambda_leading <= 0.0
    assert predict_halfline(mu, v * factor, alpha, 2.0).log_abs_lambda > base.log_abs_lambda
    a2 = alpha * factor
    assume(mu != 1.0 or a2 < 0.9)
    assert predict_halfline(mu, v, a2, 2.0).log_abs_lambda > base.log_abs_lambda


def test_refined_log_value():
    p = predict_halfline(1.0, V_PHI1, 0.01)
    t = -p.lambda_refined
    assert -t * math.log(t) == pytest.approx(2 * 0.01 * V_PHI1, rel=1e-13)
    # the displayed law is the first term of the inverse
    assert p.lambda_refined / p.lambda_leading == pytest.approx(1.0, abs=0.6)


def test_optimal_kappa_examples():
    assert optimal_kappa(0.5, 1.0, 0.01) == pytest.approx(0.01, rel=1e-13)
    assert optimal_kappa(1.0, 1.0, 0.01) ** 2 == pytest.approx(0.02 / math.log(100.0), rel=1e-13)
    assert optimal_kappa(1.0, 1.0, 0.01) ** 2 == pytest.approx(4.3429e-3, rel=1e-4)
    assert optimal_kappa(0.0, 1.0, 0.1) ** 2 == pytest.approx(
        EXP_TRIAL_CONSTANT * math.exp(-20.0), rel=1e-13)
    with pytest.raises(DomainError):
        optimal_kappa(1.5, 1.0, 0.01)


@given(st.floats(0.02, 1.0), st.floats(0.1, 5.0), st.floats(1e-4, 0.2))
def test_optimal_kappa_matches_leading_law(mu, v, alpha):
    k = optimal_kappa(mu, v, alpha)
    assert -k * k == pytest.approx(predict_halfline(mu, v, alpha).lambda_leading, rel=1e-11)


def test_invert_tlogt_examples():
    top = math.exp(-1.0)
    assert invert_tlogt(top) == top
    assert invert_tlogt(0.01 * math.log(100.0)) == pytest.approx(0.01, rel=1e-13)
    for s in (0.0, -1.0, 0.5):
        with pytest.raises(DomainError):
            invert_tlogt(s)


@given(st.floats(1e-300, math.exp(-1.0) * (1 - 1e-6)))
def test_invert_tlogt_against_lambert_w(s):
    # -t ln t = s  <=>  t = exp(W_{-1}(-s))
    ref = math.exp(special.lambertw(-s, k=-1).real)
    assert invert_tlogt(s) == pytest.approx(ref, rel=1e-12)


@given(st.floats(1e-200, 0.3), st.floats(1.0001, 1.2))
def test_invert_tlogt_increasing(s, f):
    assert invert_tlogt(min(s * f, math.exp(-1.0))) > invert_tlogt(s)


def test_invert_tlogt_remainder_form():
    s = np.geomspace(1e-12, 1e-3, 60)
    dev = [abs(invert_tlogt(x) * math.log(x) / -x - 1.0) for x in s]
    scale = np.log(np.abs(np.log(s))) / np.abs(np.log(s))
    assert max(np.array(dev) / scale) <= 1.0


@pytest.mark.parametrize("phi, regimes", [(1.5, [LINEAR, POWER]), (1.0, [LOG, EXPONENTIAL]),
                                          (0.0, [EXPONENTIAL, EXPONENTIAL]),
                                          (2.5, [LINEAR, LINEAR, POWER])])
def test_full_operator_predictions(setups, phi, regimes):
    s = setups[phi]
    preds = predict_pauli(s, 0.01)
    assert len(preds) == s.Nprime
    assert [p.regime for p in preds] == regimes
    logs = [p.log_abs_lambda for p in preds]
    assert logs == sorted(logs, reverse=True)
    mirrored = predict_pauli(s.reflected(), 0.01)
    assert sorted((p.channel.conjugate(), p.lambda_leading) for p in mirrored) == \
        sorted((p.channel, p.lambda_leading) for p in preds)


def test_power_channel_prediction_in_full_list(setups):
    pw = [p for p in predict_pauli(setups[1.5], 0.01) if p.regime == POWER][0]
    assert pw.channel == Channel(-1, -1)
    assert pw.lambda_leading == pytest.approx(-c_mu(0.5) * (0.01 * pw.v) ** 2, rel=1e-14)


def test_power_to_log_crossover_is_bounded():
    # diagnostic only: the two laws stay within a modest factor as mu -> 1
    alpha = 1e-3
    ratio = predict_halfline(0.999, 1.0, alpha).lambda_leading / \
        predict_halfline(1.0, 1.0, alpha).lambda_leading
    assert math.isfinite(ratio) and ratio > 0
