"""Leading-order weak-coupling laws per channel and for the full operator."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .channels import (EXPONENTIAL, LINEAR, LOG, POWER, Channel, regime_for,
                       virtual_channels, zero_mode)
from .fields import FieldSetup
from .specfun import c_mu, gamma

EXP_TRIAL_CONSTANT = 0.25  # C in κ² = C exp(-2/(αv))


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class AsymptoticPrediction:
    channel: Channel | None
    regime: str
    mu: float
    v: float
    norm_sq: float
    alpha: float
    lambda_leading: float
    log_abs_lambda: float  # ln|λ|, finite even when λ underflows (exponential regime)
    remainder_order: str
    lambda_refined: float | None = None  # μ = 1 only: -f⁻¹(2αv), f(t) = -t ln t


def _remainder_tag(regime, mu):
    if regime == EXPONENTIAL:
        return "ln|lambda| * (1 + O(alpha))"
    if regime == POWER:
        return "O(alpha^min(1, 1/mu - 1))"
    if regime == LOG:
        return "O(ln|ln alpha| / |ln alpha|)"
    if mu == 2.0:
        return "O(alpha |ln alpha|)"
    return "O(alpha^min(1, mu - 1))"


def predict_halfline(mu: float, v: float, alpha: float, norm_sq: float = math.nan,
                     channel: Channel | None = None) -> AsymptoticPrediction:
    mu, v, alpha = float(mu), float(v), float(alpha)
    if not v > 0.0:
        raise DomainError(f"the leading law needs v > 0, got v = {v}")
    if not alpha > 0.0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if mu < 0.0:
        raise DomainError(f"mu must be non-negative, got {mu}")
    regime = regime_for(mu)
    refined = None
    if regime == EXPONENTIAL:
        log_abs = -2.0 / (alpha * v)
        lam = -math.exp(log_abs)
    elif regime == POWER:
        lam = -c_mu(mu) * (alpha * v) ** (1.0 / mu)
        log_abs = math.log(-lam)
    elif regime == LOG:
        if alpha >= 1.0:
            raise DomainError("the logarithmic law needs alpha < 1")
        lam = -2.0 * alpha * v / abs(math.log(alpha))
        log_abs = math.log(-lam)
        if 2.0 * alpha * v <= math.exp(-1.0):
            refined = -invert_tlogt(2.0 * alpha * v)
    else:
        if not (math.isfinite(norm_sq) and norm_sq > 0.0):
            raise DomainError(f"mu > 1 needs the finite norm of the zero mode, got {norm_sq}")
        lam = -alpha * v / norm_sq
        log_abs = math.log(-lam)
    return AsymptoticPrediction(channel, regime, mu, v, float(norm_sq), alpha, lam, log_abs,
                                _remainder_tag(regime, mu), refined)


def predict_pauli(setup: FieldSetup, alpha: float) -> list:
    """One prediction per eigenvalue of the full operator, most negative first."""
    out = []
    for ch, _, mu in virtual_channels(setup):
        mode = zero_mode(setup, ch)
        out.append(predict_halfline(mu, mode.v_coeff, alpha, mode.norm_sq, ch))
    out.sort(key=lambda p: (p.log_abs_lambda, p.channel), reverse=True)
    return out


def optimal_kappa(mu: float, v: float, alpha: float) -> float:
    """κ of the near-optimal glued trial function for μ ∈ [0, 1]."""
    mu, v, alpha = float(mu), float(v), float(alpha)
    if mu > 1.0:
        raise DomainError("mu > 1 needs no kappa: the zero mode itself is the trial function")
    if not (v > 0.0 and alpha > 0.0):
        raise DomainError(f"need v > 0 and alpha > 0, got v = {v}, alpha = {alpha}")
    if mu == 0.0:
        return math.sqrt(EXP_TRIAL_CONSTANT) * math.exp(-1.0 / (alpha * v))
    if mu == 1.0:
        if alpha >= 1.0:
            raise DomainError("the logarithmic choice needs alpha < 1")
        return math.sqrt(2.0 * alpha * v / -math.log(alpha))
    k2 = (gamma(mu) * alpha * v / (2.0 ** (1.0 - 2.0 * mu) * gamma(1.0 - mu))) ** (1.0 / mu)
    return math.sqrt(k2)


def invert_tlogt(s: float, rtol: float = 1e-14) -> float:
    """t in (0, 1/e] with -t ln t = s."""
    s = float(s)
    top = math.exp(-1.0)
    if not 0.0 < s <= top:
        raise DomainError(f"invert_tlogt needs 0 < s <= 1/e, got {s}")
    if s == top:
        return top
    # Newton in u = ln t on h(u) = u + ln(-u) - ln s, concave and increasing for u < -1:
    # iterates stay left of the root and increase monotonically
    ls = math.log(s)
    u = min(ls - math.log(-ls), -2.0) if ls < -1.0 else -2.0
    u = min(u, -1.0 - 1e-12)
    for _ in range(500):
        h = u + math.log(-u) - ls
        step = h / (1.0 + 1.0 / u)
        u_new = u - step
        if u_new >= -1.0:
            u_new = 0.5 * (u - 1.0)
        if abs(u_new - u) <= rtol * abs(u_new):
            u = u_new
            break
        u = u_new
    return math.exp(u)
