"""Muckenhoupt-type certificates that a channel carries no negative eigenvalue.

For a positive zero-energy solution ω growing at infinity,

    t[ψ] >= (4 M)^-1 ∫ V |ψ|² r dr,   M = sup_r ∫_0^r V ω² ρ dρ · ∫_r^∞ ω^-2 ρ^-1 dρ,

so T - αV >= 0 for α <= 1/(4M).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .channels import (LOG_GROWING, POWER_GROWING, Channel, ZeroMode, virtual_channels,
                       zero_mode)
from .fields import FieldSetup, RadialProfile
from .quadrature import CumulativeIntegral, panel_edges

log = logging.getLogger(__name__)


class GrowthClassError(ValueError):
    """The zero mode does not grow at infinity; the bound does not apply."""


class DecayCheckError(RuntimeError):
    """Certificates fail to decrease in |m| beyond the virtual window."""


@dataclass(frozen=True)
class HardyCertificate:
    channel: Channel
    muck_sup: float
    alpha_threshold: float
    argmax: float = math.nan

    @property
    def unbounded(self) -> bool:
        """V ≡ 0: every coupling is certified."""
        return math.isinf(self.alpha_threshold)


def _sample_piece(a, b, n, first):
    if first:
        return np.geomspace(a, b, n)
    return np.linspace(a, b, n)


class _MuckenhouptProduct:
    def __init__(self, mode: ZeroMode, V: RadialProfile):
        self.mode = mode
        self.V = V
        setup = mode.setup
        self.rB = setup.r_B
        self.rV = V.support_radius
        pos = [p for p in set(setup.B.breakpoints) | set(V.breakpoints) if p > 0.0]
        self.r_lo = 1e-4 * min(pos)
        w = lambda x: mode(x.ravel()).reshape(x.shape)
        n_edges = panel_edges(sorted(set(setup.B.breakpoints) | set(V.breakpoints)), 24)
        self.N = CumulativeIntegral(lambda x: V(x.ravel()).reshape(x.shape) * w(x) ** 2 * x,
                                    n_edges[n_edges <= self.rV])
        d_pts = sorted({self.r_lo} | {p for p in pos if self.r_lo < p <= self.rB})
        d_edges = np.unique(np.concatenate(
            [np.geomspace(a, b, 25) for a, b in zip(d_pts[:-1], d_pts[1:])]))
        self.D_inner = CumulativeIntegral(lambda x: 1.0 / (w(x) ** 2 * x), d_edges)
        self.A, self.C = mode.exterior_coefficients()
        if not self.A > 0.0:
            raise GrowthClassError(f"zero mode of {mode.channel} does not grow (A = {self.A})")
        self.D_rB = self._D_tail(self.rB)

    def _D_tail(self, r):
        mu, A, C = self.mode.tail_mu, self.A, self.C
        if mu == 0.0:
            return 1.0 / (A * (A * math.log(r) + C))
        return 1.0 / (2.0 * mu * A * (A * r ** (2.0 * mu) + C))

    def D(self, r):
        if r >= self.rB:
            return self._D_tail(r)
        return self.D_rB + float(self.D_inner.upper(r))

    def Nv(self, r):
        if r >= self.rV:
            return self.N.total
        return float(self.N(r))

    def __call__(self, r):
        return self.Nv(r) * self.D(r)


def muckenhoupt_constant(mode: ZeroMode, V: RadialProfile | None = None) -> HardyCertificate:
    """Certificate for the channel of a growing zero mode."""
    if mode.decay_class not in (LOG_GROWING, POWER_GROWING):
        raise GrowthClassError(
            f"channel {mode.channel} has a {mode.decay_class} zero mode; "
            "the Muckenhoupt bound needs a growing one")
    V = mode.setup.V if V is None else V
    if V.is_zero():
        return HardyCertificate(mode.channel, 0.0, math.inf, math.nan)
    M = _MuckenhouptProduct(mode, V)
    # N is constant beyond supp V and D is decreasing, so the sup lives in (0, rV]
    top = M.rV
    pts = sorted({M.r_lo} | {p for p in set(mode.setup.B.breakpoints) | set(V.breakpoints)
                             if M.r_lo < p <= top})
    best_r, best = top, M(top)
    for k, (a, b) in enumerate(zip(pts[:-1], pts[1:])):
        rs = _sample_piece(a, b, 65, k == 0)
        vals = np.array([M(r) for r in rs])
        i = int(np.argmax(vals))
        r_i, v_i = rs[i], vals[i]
        if 0 < i < len(rs) - 1:
            res = optimize.minimize_scalar(lambda r: -M(r), bounds=(rs[i - 1], rs[i + 1]),
                                           method="bounded",
                                           options={"xatol": 1e-12 * rs[i + 1]})
            if -res.fun > v_i:
                r_i, v_i = float(res.x), -float(res.fun)
        if v_i > best:
            best_r, best = float(r_i), float(v_i)
    return HardyCertificate(mode.channel, best, 1.0 / (4.0 * best), best_r)


@dataclass
class SetupCertification:
    alpha_c: float
    per_channel: list
    moment_sups: list = field(default_factory=list)  # k -> sup_r k^-1 r^-2k ∫_0^r V ρ^(2k+1)
    log_sup: float = math.nan  # sup_r |ln r| ∫_0^r V ρ dρ
    decay_ok: bool = True

    def __iter__(self):
        return iter((self.alpha_c, self.per_channel))

    def certificate(self, channel: Channel) -> HardyCertificate:
        for c in self.per_channel:
            if c.channel == channel:
                return c
        raise KeyError(channel)


def _sup_conditions(V: RadialProfile, R: float, k_max: int):
    r = np.unique(np.concatenate((np.geomspace(1e-12 * R, R, 4001),
                                  [p for p in V.breakpoints if 0 < p <= R])))
    sups = []
    for k in range(1, k_max + 1):
        rk = r ** (2.0 * k)
        ok = rk > 1e-250  # the ratio behaves like V(0) r² / (k(2k+2)) below this
        vals = V.moment(r[ok], 2.0 * k + 1.0) / (k * rk[ok])
        sups.append(float(np.max(np.abs(vals))))
    log_sup = float(np.max(np.abs(np.log(r) * V.moment(r, 1.0))))
    return sups, log_sup


def certify_setup(setup: FieldSetup, m_max: int = 16, strict: bool = True) -> SetupCertification:
    """Certificates for every non-virtual channel with |m| <= m_max, both spins."""
    phi = abs(setup.flux_class)
    if m_max < phi + 2.0:
        raise ValueError(f"m_max = {m_max} must be at least |flux| + 2 = {phi + 2.0}")
    virtual = {ch for ch, _, _ in virtual_channels(setup)}
    certs = []
    for m in range(-m_max, m_max + 1):
        for spin in (1, -1):
            ch = Channel(m, spin)
            if ch in virtual:
                continue
            certs.append(muckenhoupt_constant(zero_mode(setup, ch), setup.V))
    alpha_c = min((c.alpha_threshold for c in certs), default=math.inf)
    sups, log_sup = _sup_conditions(setup.V, setup.R, m_max)
    decay_ok = all(b <= a * (1.0 + 1e-9) for a, b in zip(sups[:-1], sups[1:]))
    # muck_sup must not increase in |m| once |m| >= |flux| + 2
    start = math.ceil(phi + 2.0)
    by_key = {(c.channel.m, c.channel.spin): c.muck_sup for c in certs}
    for spin in (1, -1):
        for sign in (1, -1):
            seq = [by_key[(sign * k, spin)] for k in range(start, m_max + 1)
                   if (sign * k, spin) in by_key]
            if any(b > a * (1.0 + 1e-9) for a, b in zip(seq[:-1], seq[1:])):
                decay_ok = False
                log.warning("muck_sup not monotone in |m| for spin %+d, sign %+d: %s",
                            spin, sign, seq)
    result = SetupCertification(alpha_c, certs, sups, log_sup, decay_ok)
    if strict and not decay_ok:
        raise DecayCheckError("certificates do not decay in |m| beyond the virtual window")
    return result
