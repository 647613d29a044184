"""Angular-momentum channels: potentials W_m^±, zero modes ω_m^± and their coefficients."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fields import FieldSetup, azimuthal_potential, xi
from .quadrature import CumulativeIntegral, integrate_panels, panel_edges

L2_EIGENMODE = "L2-eigenmode"
BOUNDED_VIRTUAL = "bounded-virtual"
LOG_GROWING = "log-growing"
POWER_GROWING = "power-growing"

EXPONENTIAL = "exponential"
POWER = "power"
LOG = "log"
LINEAR = "linear"


@dataclass(frozen=True, order=True)
class Channel:
    m: int
    spin: int  # +1 or -1

    def __post_init__(self):
        if self.spin not in (1, -1):
            raise ValueError(f"spin must be +1 or -1, got {self.spin}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def spin_symbol(self) -> str:
        return "+" if self.spin > 0 else "-"

    def conjugate(self) -> "Channel":
        """Image under complex conjugation (B -> -B)."""
        return Channel(-self.m, -self.spin)

    @classmethod
    def parse(cls, text: str) -> "Channel":
        m, s = text.split(",")
        s = s.strip()
        if s not in ("+", "-", "+1", "-1"):
            raise ValueError(f"bad spin {s!r} in channel {text!r}")
        return cls(int(m), 1 if s.startswith("+") else -1)

    def __str__(self):
        return f"({self.m},{self.spin_symbol})"


def regime_for(mu: float) -> str:
    if mu == 0.0:
        return EXPONENTIAL
    if mu < 1.0:
        return POWER
    if mu == 1.0:
        return LOG
    return LINEAR


@dataclass(frozen=True)
class ChannelPotential:
    setup: FieldSetup
    channel: Channel
    tail_mu: float

    @property
    def R(self) -> float:
        return self.setup.R

    def W(self, r, left=False):
        r = np.asarray(r, dtype=float)
        m, s = self.channel.m, self.channel.spin
        B = self.setup.B
        b = azimuthal_potential(B, r)
        inner = (b + m / r) ** 2 + s * B(r, left)
        return np.where(r >= self.setup.r_B, self.tail_mu**2 / r**2, inner)

    def scaled_W(self, r, left=False):
        """r^2 W(r), finite at the origin."""
        r = np.asarray(r, dtype=float)
        m, s = self.channel.m, self.channel.spin
        B = self.setup.B
        F = B.moment(r, 1.0)
        inner = (F + m) ** 2 + s * r**2 * B(r, left)
        return np.where(r >= self.setup.r_B, self.tail_mu**2 + 0.0 * r, inner)


def channel_potential(setup: FieldSetup, channel: Channel) -> ChannelPotential:
    return ChannelPotential(setup, channel, abs(channel.m + setup.flux_class))


def classify(setup: FieldSetup, channel: Channel):
    """Decay class of ω and its tail exponent |m + Φ|."""
    phi = setup.flux_class
    s, m = channel.spin, channel.m
    mu = abs(m + phi)
    if s * m < 0:  # integral representation; always growing
        return (LOG_GROWING if mu == 0.0 else POWER_GROWING), mu
    e = s * (m + phi)
    if e > 0:
        return POWER_GROWING, mu
    if e >= -1.0:
        return BOUNDED_VIRTUAL, mu
    return L2_EIGENMODE, mu


@dataclass
class ZeroMode:
    """Positive solution ω = scale · r^a e^{σξ} I(r) of the zero-energy channel equation.

    ``I`` is 1 for the elementary modes and ``int_0^r e^{-2σξ} ρ^{-2a-1} dρ`` otherwise.
    """

    setup: FieldSetup
    channel: Channel
    decay_class: str
    tail_mu: float
    a: int
    sigma: int
    scale: float = 1.0
    v_coeff: float = float("nan")
    norm_sq: float = float("nan")
    _integral: CumulativeIntegral = field(default=None, repr=False)

    @property
    def is_virtual(self) -> bool:
        return self.decay_class in (BOUNDED_VIRTUAL, L2_EIGENMODE)

    def _exponent_tail(self):
        # I(r) ~ int rho^q, q + 1 = 2(σΦ - a)
        return 2.0 * (self.sigma * self.setup.flux - self.a)

    def _I(self, r):
        if self._integral is None:
            return np.ones_like(r)
        rB = self.setup.r_B
        out = np.empty_like(r)
        inside = r < rB
        if np.any(inside):
            out[inside] = self._integral(r[inside])
        outside = ~inside
        if np.any(outside):
            p = self._exponent_tail()
            ro = r[outside]
            if p == 0.0:
                tail = np.log(ro / rB)
            else:
                tail = rB**p * np.expm1(p * np.log(ro / rB)) / p
            out[outside] = self._integral.total + tail
        return out

    def _integrand(self, rho):
        return np.exp(-2.0 * self.sigma * xi(self.setup.B, rho.ravel()).reshape(rho.shape)) \
            * rho ** (-2 * self.a - 1)

    def __call__(self, r):
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = self.scale * r**self.a * np.exp(self.sigma * xi(self.setup.B, r)) * self._I(r)
        return float(out[0]) if scalar else out

    def deriv(self, r):
        """ω'(r) from ξ' = -b."""
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        w = self(r)
        out = w * (self.a / r - self.sigma * azimuthal_potential(self.setup.B, r))
        if self._integral is not None:
            out = out + self.scale * r ** (-self.a - 1) * np.exp(-self.sigma * xi(self.setup.B, r))
        return float(out[0]) if scalar else out

    def exterior_coefficients(self):
        """(A, C) with ω = A r^μ + C r^-μ (μ>0) or A ln r + C (μ=0) beyond supp B."""
        r = self.setup.r_B
        w, rw = self(r), r * self.deriv(r)
        mu = self.tail_mu
        if mu == 0.0:
            A = rw
            return A, w - A * math.log(r)
        A = (w + rw / mu) / (2.0 * r**mu)
        C = (w - rw / mu) * r**mu / 2.0
        return A, C

    def norm_sq_upto(self, upto):
        """``int_0^upto ω² r dr`` for upto >= supp B (decaying or bounded modes)."""
        rB = self.setup.r_B
        edges = panel_edges(self.setup.B.breakpoints, 24)
        inner = integrate_panels(lambda x: self(x.ravel()).reshape(x.shape) ** 2 * x, edges)
        if upto <= rB:
            raise ValueError("upto must reach the support of B")
        return inner + _power_tail_integral(self.scale**2, 1.0 - 2.0 * self.tail_mu, rB, upto)


def _power_tail_integral(c, q, a, b):
    """c * int_a^b r^q dr, b may be inf."""
    if math.isinf(b):
        if q >= -1.0:
            return math.inf
        return -c * a ** (q + 1.0) / (q + 1.0)
    if q == -1.0:
        return c * math.log(b / a)
    return c * (b ** (q + 1.0) - a ** (q + 1.0)) / (q + 1.0)


def zero_mode(setup: FieldSetup, channel: Channel) -> ZeroMode:
    decay, mu = classify(setup, channel)
    s, m = channel.spin, channel.m
    a, sigma = s * m, -s
    mode = ZeroMode(setup, channel, decay, mu, a, sigma)
    if a < 0:
        edges = panel_edges(setup.B.breakpoints, 24)
        mode._integral = CumulativeIntegral(mode._integrand, edges)
    if not mode.is_virtual:
        mode.scale = 1.0 / mode(setup.R)
    v, nsq = mode_coefficients(setup, mode)
    mode.v_coeff, mode.norm_sq = v, nsq
    return mode


def mode_coefficients(setup: FieldSetup, mode: ZeroMode):
    """(v, norm_sq) = (∫ V ω² r dr, ∫ ω² r dr or inf)."""
    V = setup.V
    if V.is_zero():
        v = 0.0
    else:
        pts = sorted(set(setup.B.breakpoints) | set(V.breakpoints))
        pts = [p for p in pts if p <= V.support_radius]
        edges = panel_edges(pts, 24)
        v = integrate_panels(
            lambda x: V(x.ravel()).reshape(x.shape) * mode(x.ravel()).reshape(x.shape) ** 2 * x,
            edges)
    if mode.decay_class == L2_EIGENMODE:
        nsq = mode.norm_sq_upto(math.inf)
    else:
        nsq = math.inf
    return v, nsq


def virtual_channels(setup: FieldSetup):
    """Channels carrying a weakly coupled eigenvalue: list of (Channel, regime, mu)."""
    phi = setup.flux_class
    if phi == 0.0:
        return [(Channel(0, 1), EXPONENTIAL, 0.0), (Channel(0, -1), EXPONENTIAL, 0.0)]
    aphi = abs(phi)
    out = []
    for m in range(0, -int(math.floor(aphi)) - 1, -1):
        mu = abs(m + aphi)
        if setup.integer_flux:
            mu = float(round(mu))
        ch = Channel(m, -1)
        if phi < 0:
            ch = ch.conjugate()
        out.append((ch, regime_for(mu), mu))
    return out
