"""Gamma, modified Bessel K and the power-regime constant c_mu."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

MAX_ORDER = 10.0


class BesselOverflowError(ArithmeticError):
    """K_mu(x) is not representable in double precision."""

    def __init__(self, order, x):
        super().__init__(f"K_{order}({x}) overflows double precision")
        self.order = order
        self.x = x


@dataclass(frozen=True)
class BesselEval:
    order: float
    argument: float
    value: float
    derivative: float


def gamma(x: float) -> float:
    """Gamma function for positive real arguments."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"gamma is only defined here for x > 0, got {x}")
    return math.gamma(x)


def _snap(order):
    # K_ν = K_0 + O(ν²): below 1e-12 the difference is invisible, and scipy
    # returns nan for subnormal orders
    return np.where(np.abs(order) < 1e-12, 0.0, order)


def kv(order, x):
    """Vectorised K_order(x); raises BesselOverflowError instead of returning inf."""
    val = special.kv(_snap(order), x)
    if not np.all(np.isfinite(val)):
        bad = np.flatnonzero(~np.isfinite(np.atleast_1d(val)))[0]
        raise BesselOverflowError(order, np.atleast_1d(np.broadcast_to(x, np.shape(val)))[bad])
    return val


def kv_prime(order, x):
    """d/dx K_order(x) = -(K_{order-1}(x) + K_{order+1}(x)) / 2."""
    return -0.5 * (kv(abs(order - 1.0), x) + kv(order + 1.0, x))


def bessel_k(order: float, x: float) -> BesselEval:
    order = float(order)
    x = float(x)
    if not 0.0 <= order <= MAX_ORDER:
        raise ValueError(f"order must lie in [0, {MAX_ORDER}], got {order}")
    if not x > 0.0:
        raise ValueError(f"argument must be positive, got {x}")
    value = float(kv(order, x))
    deriv = float(kv_prime(order, x))
    return BesselEval(order, x, value, deriv)


def log_derivative(order, x):
    """x K'(x) / K(x), computed without forming K_{order+1} separately at overflow scale."""
    # x K'/K = -order - x K_{order-1}/K_order, and K_{-nu} = K_nu
    return -order - x * special.kve(abs(order - 1.0), x) / special.kve(_snap(order), x)


def c_mu(mu: float) -> float:
    """(2^(2mu-1) Gamma(mu) / Gamma(1-mu))^(1/mu) for 0 < mu < 1."""
    mu = float(mu)
    if not 0.0 < mu < 1.0:
        raise ValueError(f"c_mu needs 0 < mu < 1, got {mu}")
    return (2.0 ** (2.0 * mu - 1.0) * gamma(mu) / gamma(1.0 - mu)) ** (1.0 / mu)
