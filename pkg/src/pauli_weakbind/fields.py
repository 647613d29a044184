"""Radial field and potential profiles and the derived magnetic quantities.

Profiles are piecewise polynomials in ``r`` with compact support, so the flux,
the azimuthal vector potential ``b(r)`` and the stream function ``xi(r)`` all
have exact closed forms.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

log = logging.getLogger(__name__)

INTEGER_FLUX_TOL = 1e-9
NEAR_INTEGER_WARN = 1e-6


class ProfileError(ValueError):
    pass


def _power_antiderivative(coeffs, n, r):
    """Antiderivative at r of sum_j c_j rho^(j+n), zero at rho=0 (needs j+n > -1)."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    for j, c in enumerate(coeffs):
        if c == 0.0:
            continue
        q = j + n + 1.0
        out = out + c * r**q / q
    return out


def _log_antiderivative(coeffs, n, r):
    """Antiderivative of sum_j c_j rho^(j+n) ln(rho), zero at rho=0."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    safe = np.where(r > 0.0, r, 1.0)
    lr = np.log(safe)
    for j, c in enumerate(coeffs):
        if c == 0.0:
            continue
        q = j + n + 1.0
        term = safe**q * (lr / q - 1.0 / q**2)
        out = out + c * np.where(r > 0.0, term, 0.0)
    return out


@dataclass(frozen=True)
class RadialProfile:
    """Piecewise polynomial ``p(r)`` on ``[0, support_radius)``, zero beyond.

    ``coefficients[i]`` holds the ascending power coefficients in ``r`` used on
    ``[breakpoints[i], breakpoints[i+1])``.
    """

    breakpoints: tuple
    coefficients: tuple
    kind: str = "magnetic"

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        coeffs = tuple(tuple(float(c) for c in cs) for cs in self.coefficients)
        if self.kind not in ("magnetic", "electric"):
            raise ProfileError(f"unknown profile kind {self.kind!r}")
        if len(bp) < 2:
            raise ProfileError("a profile needs at least one piece (two breakpoints)")
        if bp[0] != 0.0:
            raise ProfileError(f"first breakpoint must be 0, got {bp[0]}")
        for i in range(1, len(bp)):
            if not math.isfinite(bp[i]):
                raise ProfileError(f"breakpoint {i} is not finite: {bp[i]}")
            if bp[i] <= bp[i - 1]:
                raise ProfileError(
                    f"breakpoint {i} ({bp[i]}) does not exceed breakpoint {i - 1} ({bp[i - 1]}):"
                    " pieces overlap or are empty")
        if len(coeffs) != len(bp) - 1:
            raise ProfileError(
                f"{len(bp) - 1} pieces need {len(bp) - 1} coefficient lists, got {len(coeffs)}")
        for i, cs in enumerate(coeffs):
            if len(cs) == 0:
                raise ProfileError(f"piece {i} on [{bp[i]}, {bp[i + 1]}) has no coefficients")
            if not all(math.isfinite(c) for c in cs):
                raise ProfileError(f"piece {i} on [{bp[i]}, {bp[i + 1]}) has non-finite coefficients")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def constant(cls, value, radius, kind="magnetic"):
        return cls((0.0, radius), ((value,),), kind)

    @classmethod
    def zero(cls, radius=1.0, kind="magnetic"):
        return cls((0.0, radius), ((0.0,),), kind)

    @property
    def support_radius(self) -> float:
        return self.breakpoints[-1]

    @property
    def n_pieces(self) -> int:
        return len(self.coefficients)

    def scaled(self, factor: float) -> "RadialProfile":
        return RadialProfile(self.breakpoints,
                             tuple(tuple(factor * c for c in cs) for cs in self.coefficients),
                             self.kind)

    def __neg__(self):
        return self.scaled(-1.0)

    def is_zero(self) -> bool:
        return all(c == 0.0 for cs in self.coefficients for c in cs)

    def piece_index(self, r, left=False):
        """Index of the piece containing r; n_pieces for r beyond the support."""
        side = "left" if left else "right"
        idx = np.searchsorted(self.breakpoints, r, side=side) - 1
        return np.clip(idx, 0, self.n_pieces)

    def __call__(self, r, left=False):
        """Evaluate the profile; ``left=True`` takes left limits at breakpoints."""
        r = np.asarray(r, dtype=float)
        idx = self.piece_index(r, left)
        out = np.zeros_like(r)
        for i, cs in enumerate(self.coefficients):
            mask = idx == i
            if np.any(mask):
                out[mask] = np.polynomial.polynomial.polyval(r[mask], cs)
        return out

    def max_abs(self) -> float:
        """Upper bound for sup |p| (sampled densely plus breakpoints)."""
        best = 0.0
        for i, cs in enumerate(self.coefficients):
            a, b = self.breakpoints[i], self.breakpoints[i + 1]
            x = np.linspace(a, b, 257)
            best = max(best, float(np.max(np.abs(np.polynomial.polynomial.polyval(x, cs)))))
        return best

    def moment(self, r, n=1.0):
        """Exact ``int_0^r p(rho) rho^n drho`` for n > -1 (vectorised in r)."""
        return self._cumulative(r, n, _power_antiderivative)

    def log_moment(self, r, n=1.0):
        """Exact ``int_0^r p(rho) rho^n ln(rho) drho``."""
        return self._cumulative(r, n, _log_antiderivative)

    def log_moment_above(self, r, n=1.0):
        """Exact ``int_r^inf p(rho) rho^n ln(rho) drho``, summed over pieces above r.

        Identically zero for r beyond the support.
        """
        r = np.atleast_1d(np.asarray(r, dtype=float))
        bp = self.breakpoints
        idx = self.piece_index(r)
        out = np.zeros_like(r)
        for i, cs in enumerate(self.coefficients):
            hi = _log_antiderivative(cs, n, bp[i + 1])
            lo_full = _log_antiderivative(cs, n, bp[i])
            full = hi - lo_full
            out = out + np.where(idx < i, full, 0.0)
            inside = idx == i
            if np.any(inside):
                out[inside] += hi - _log_antiderivative(cs, n, r[inside])
        return out

    def _cumulative(self, r, n, antiderivative):
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        bp = self.breakpoints
        idx = self.piece_index(r)
        out = np.zeros_like(r)
        acc = 0.0
        for i, cs in enumerate(self.coefficients):
            lo = antiderivative(cs, n, bp[i])
            inside = idx == i
            if np.any(inside):
                out[inside] = acc + antiderivative(cs, n, r[inside]) - lo
            acc = acc + float(antiderivative(cs, n, bp[i + 1]) - lo)
        out[idx >= self.n_pieces] = acc
        return float(out[0]) if scalar else out

    def log_weighted_l1(self) -> float:
        """``int |p| (1 + ln_- r) r dr`` by piecewise Gauss-Legendre quadrature."""
        x, w = np.polynomial.legendre.leggauss(40)
        total = 0.0
        t = 0.5 * (x + 1.0)
        for i, cs in enumerate(self.coefficients):
            lo, hi = self.breakpoints[i], self.breakpoints[i + 1]
            # split at sign changes of p and at r = 1 (kink of ln_-) so the
            # integrand is smooth on every sub-interval
            roots = np.polynomial.polynomial.polyroots(cs) if len(cs) > 1 else []
            cuts = sorted({float(z.real) for z in np.atleast_1d(roots)
                           if abs(z.imag) < 1e-12 and lo < z.real < hi}
                          | ({1.0} if lo < 1.0 < hi else set()))
            edges = [lo, *cuts, hi]
            for a, b in zip(edges[:-1], edges[1:]):
                # r = a + (b-a) t^2 tames the ln r endpoint at 0
                rr = a + (b - a) * t**2
                jac = (b - a) * t
                vals = np.abs(np.polynomial.polynomial.polyval(rr, cs))
                weight = 1.0 + np.maximum(-np.log(np.where(rr > 0, rr, 1e-300)), 0.0)
                total += float(np.sum(w * jac * vals * weight * rr))
        return total


def flux(B: RadialProfile) -> float:
    """Total flux ``int_0^inf B(rho) rho drho``."""
    return float(B.moment(B.support_radius, 1.0))


def azimuthal_potential(B: RadialProfile, r):
    """``b(r) = r^-1 int_0^r B rho drho``."""
    r = np.asarray(r, dtype=float)
    return B.moment(r, 1.0) / r


def xi(B: RadialProfile, r):
    """Radial stream function ``xi(r) = -F(r) ln r - int_r^inf B rho ln rho drho``."""
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    out = -B.moment(r, 1.0) * np.log(r) - B.log_moment_above(r, 1.0)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class FieldSetup:
    B: RadialProfile
    V: RadialProfile
    flux: float
    R: float
    N: int
    Nprime: int
    mu_frac: float
    integer_flux: bool

    @property
    def flux_class(self) -> float:
        """Flux snapped to the nearest integer when within the integer tolerance."""
        return float(round(self.flux)) if self.integer_flux else self.flux

    @property
    def r_B(self) -> float:
        return self.B.support_radius

    def reflected(self) -> "FieldSetup":
        """Setup for -B (complex conjugation); V unchanged."""
        return setup(-self.B, self.V)

    def breakpoints(self, upto=None):
        """Merged breakpoints of B and V, plus R (and ``upto`` if given)."""
        pts = set(self.B.breakpoints) | set(self.V.breakpoints) | {self.R}
        if upto is not None:
            pts.add(float(upto))
            pts = {p for p in pts if p <= upto}
        return np.array(sorted(pts))


def setup(B: RadialProfile, V: RadialProfile) -> FieldSetup:
    if B.kind != "magnetic":
        B = RadialProfile(B.breakpoints, B.coefficients, "magnetic")
    if V.kind != "electric":
        V = RadialProfile(V.breakpoints, V.coefficients, "electric")
    for name, prof in (("B", B), ("V", V)):
        val = prof.log_weighted_l1()
        if not math.isfinite(val):
            raise ProfileError(f"{name} fails the ln_- weighted integrability check")
    phi = flux(B)
    nearest = round(phi)
    gap = abs(phi - nearest)
    integer = gap <= INTEGER_FLUX_TOL
    if not integer and gap < NEAR_INTEGER_WARN:
        log.warning("flux %.17g is within %.1e of an integer but treated as non-integer", phi, gap)
    aphi = float(abs(nearest)) if integer else abs(phi)
    N = max(0, math.ceil(aphi - 1.0))
    Nprime = N + 2 if integer else N + 1
    mu_frac = 0.0 if integer else aphi - math.floor(aphi)
    R = 2.0 * max(B.support_radius, V.support_radius)
    return FieldSetup(B, V, phi, R, N, Nprime, mu_frac, integer)


def uniform_setup(B0: float, V0: float = 1.0, radius: float = 1.0) -> FieldSetup:
    """Constant field B0 and constant potential V0 on the disc of the given radius."""
    return setup(RadialProfile.constant(B0, radius, "magnetic"),
                 RadialProfile.constant(V0, radius, "electric"))


def profile_from_arrays(breakpoints: Sequence[float], coefficients, kind: str) -> RadialProfile:
    return RadialProfile(tuple(breakpoints), tuple(tuple(c) for c in coefficients), kind)
