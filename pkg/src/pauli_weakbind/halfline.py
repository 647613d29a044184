"""Lowest eigenvalues and negative-eigenvalue counts of T_m^± - αV on L2(R+, r dr).

Two independent routes:

* shooting in s = ln r on the Prüfer angle of (ψ, rψ'), matched at R to the
  exact exterior solution K_μ(κr);
* piecewise-linear finite elements with weight r on a geometric mesh, with the
  pencil inertia read off an LDLᵀ sweep (Sturm count) and Richardson
  extrapolation in the mesh ratio.

Counts use the finite-element pencil on [0, R] closed by the exact zero-energy
exterior form μ|f(R)|², so no truncation is needed however small |λ| is.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from numpy.polynomial import polynomial as P
from scipy import integrate, optimize, special
from scipy.linalg import solve_banded

from .channels import ChannelPotential, ZeroMode
from .fields import RadialProfile
from .specfun import BesselOverflowError, kv, log_derivative


class NoRootError(RuntimeError):
    """The matching function has no sign change: no negative eigenvalue in range."""


class StiffnessError(RuntimeError):
    pass


class TruncationError(RuntimeError):
    """Doubling the truncation radius did not converge the eigenvalue."""


SHOOT_START = 1e-8  # s0 = ln(SHOOT_START * R)
SHOOT_RTOL = 1e-12


@dataclass(frozen=True)
class HalfLineProblem:
    potential: ChannelPotential
    alpha: float

    @property
    def setup(self):
        return self.potential.setup

    @property
    def V(self) -> RadialProfile:
        return self.potential.setup.V

    @property
    def R(self) -> float:
        return self.potential.setup.R

    @property
    def mu(self) -> float:
        return self.potential.tail_mu

    @property
    def channel(self):
        return self.potential.channel

    def with_alpha(self, alpha):
        return HalfLineProblem(self.potential, alpha)

    def breaks(self):
        """Breakpoints of B and V inside (0, R], ending with R."""
        pts = set(self.setup.B.breakpoints[1:]) | set(self.V.breakpoints[1:]) | {self.R}
        return np.array(sorted(p for p in pts if p <= self.R))

    def segment_polys(self, alpha=None):
        """Per-segment ascending coefficients of r²(W - αV) on [0, R]."""
        alpha = self.alpha if alpha is None else alpha
        B, V = self.setup.B, self.V
        m, s = self.channel.m, self.channel.spin
        mu2 = self.mu**2
        edges = np.concatenate(([0.0], self.breaks()))
        out = []
        for a, b in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (a + b)
            if mid >= self.setup.r_B:
                q = np.array([mu2])
            else:
                i = int(B.piece_index(mid))
                c = np.array(B.coefficients[i])
                F = P.polyint(P.polymulx(c), lbnd=B.breakpoints[i])
                F = P.polyadd(F, [B.moment(B.breakpoints[i], 1.0)])
                Fm = P.polyadd(F, [float(m)])
                q = P.polyadd(P.polymul(Fm, Fm), s * P.polymulx(P.polymulx(c)))
            if mid < V.support_radius and alpha != 0.0:
                j = int(V.piece_index(mid))
                cv = np.array(V.coefficients[j])
                q = P.polysub(q, alpha * P.polymulx(P.polymulx(cv)))
            out.append((a, b, np.trim_zeros(np.asarray(q, dtype=float), "b") if np.any(q) else np.array([0.0])))
        return out


@dataclass
class EigenResult:
    lam: float
    kappa: float
    method: str
    r: np.ndarray
    psi: np.ndarray
    dpsi: np.ndarray
    mu: float
    R: float
    mesh_info: dict = field(default_factory=dict)
    match_residual: float = 0.0

    @property
    def eigenfunction_samples(self):
        return list(zip(self.r.tolist(), self.psi.tolist()))

    def exterior_shape_error(self):
        """Max relative deviation from K_μ(κr)/(R^μ K_μ(κR)) on samples with r >= R."""
        mask = self.r >= self.R
        if not np.any(mask):
            return 0.0
        rr = self.r[mask]
        x = self.kappa * rr
        ref = special.kve(self.mu, x) * np.exp(self.kappa * (self.R - rr)) / (
            self.R**self.mu * special.kve(self.mu, self.kappa * self.R))
        return float(np.max(np.abs(self.psi[mask] / ref - 1.0)))


# ---------------------------------------------------------------- shooting


def _horner(c, x):
    acc = 0.0
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _prufer_rhs(coeffs, lam):
    c = [float(v) for v in coeffs]

    def rhs(s, y):
        r = math.exp(s)
        Q = _horner(c, r) - lam * r * r
        th = y[0]
        sn, cs = math.sin(th), math.cos(th)
        return [cs * cs - Q * sn * sn, (1.0 + Q) * sn * cs]

    return rhs


def integrate_interior(problem: HalfLineProblem, lam: float, dense=False, upto=None):
    """Prüfer angle θ and ln amplitude of (ψ, rψ') at R, integrating in s = ln r.

    Returns (theta_R, logrho_R, pieces) where pieces holds dense solutions per segment.
    """
    m = abs(problem.channel.m)
    upto = problem.R if upto is None else upto
    y = [math.atan2(1.0, m), 0.5 * math.log(1.0 + m * m)]
    s_prev = math.log(SHOOT_START * problem.R)
    pieces = []
    for a, b, q in problem.segment_polys():
        if b <= math.exp(s_prev):
            continue
        b = min(b, upto)
        s_end = math.log(b)
        sol = integrate.solve_ivp(_prufer_rhs(q, lam), (s_prev, s_end), y, method="DOP853",
                                  rtol=SHOOT_RTOL, atol=1e-13, dense_output=dense)
        if sol.status != 0:
            raise StiffnessError(f"interior integration failed: {sol.message}")
        y = sol.y[:, -1].tolist()
        if dense:
            pieces.append((s_prev, s_end, sol.sol))
        s_prev = s_end
        if b >= upto:
            break
    return y[0], y[1], pieces


def exterior_angle(mu, kappa, R):
    """Prüfer angle in (0, π) of the decaying exterior solution at R."""
    g = log_derivative(mu, kappa * R)
    return math.atan2(1.0, g)


def mismatch(problem: HalfLineProblem, kappa: float, index: int = 1) -> float:
    """Angle form of [rψ'/ψ]_interior(R) - κR K_μ'(κR)/K_μ(κR); decreasing in κ.

    The index-th eigenvalue (index - 1 interior nodes) is the zero of this function.
    """
    theta, _, _ = integrate_interior(problem, -kappa * kappa)
    return theta - exterior_angle(problem.mu, kappa, problem.R) - (index - 1) * math.pi


def shoot_eigenvalue(problem: HalfLineProblem, bracket, samples=True, index=1) -> EigenResult:
    """Eigenvalue λ = -κ² (lowest by default) by matching interior and exterior
    Prüfer angles at R."""
    if problem.alpha <= 0.0:
        raise NoRootError("alpha <= 0: T is non-negative")
    k_lo, k_hi = bracket
    if not 0.0 < k_lo < k_hi:
        raise ValueError(f"invalid bracket {bracket}")
    # root-find in u = ln κ: the exponential regime spans hundreds of decades in λ
    f = lambda u: mismatch(problem, math.exp(u), index)
    lo_u, hi_u = math.log(k_lo), math.log(k_hi)
    flo, fhi = f(lo_u), f(hi_u)
    widen = 0
    while not (flo > 0.0 > fhi):
        if widen >= 10:
            raise NoRootError(
                f"no sign change of the matching function for kappa in "
                f"[{math.exp(lo_u):.3e}, {math.exp(hi_u):.3e}]")
        widen += 1
        step = widen * math.log(2.0)  # endpoint moves by a factor 2**widen
        if flo <= 0.0:
            hi_u, fhi = lo_u, flo
            lo_u = lo_u - step
            flo = f(lo_u)
        else:
            lo_u, flo = hi_u, fhi
            hi_u = min(hi_u + step, math.log(1e6 / problem.R))
            fhi = f(hi_u)
    u = optimize.brentq(f, lo_u, hi_u, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)
    kappa = math.exp(u)
    lam = -kappa * kappa
    residual = abs(f(u))
    if samples:
        r, psi, dpsi = _shoot_samples(problem, lam, kappa)
    else:
        r = psi = dpsi = np.empty(0)
    return EigenResult(lam, kappa, "shoot", r, psi, dpsi, problem.mu, problem.R,
                       {"s0": math.log(SHOOT_START * problem.R), "rtol": SHOOT_RTOL,
                        "bracket_widenings": widen, "index": index}, residual)


def _points(per_segment):
    # n ≡ 1 (mod 4), so Simpson also runs on every other point
    return 4 * max(1, round(per_segment / 4)) + 1


def sample_grid(problem: HalfLineProblem, per_segment=1600):
    """Interior grid on [1e-8 R, R], uniform in s = ln r on each segment between
    breakpoints with 4k+1 points per segment (ready for Romberg-Simpson)."""
    s_prev = math.log(SHOOT_START * problem.R)
    grids = []
    for a, b, _ in problem.segment_polys():
        s_end = math.log(b)
        n = _points(per_segment)
        g = np.exp(np.linspace(s_prev, s_end, n))
        grids.append(g if not grids else g[1:])
        s_prev = s_end
    return np.concatenate(grids)


def _shoot_samples(problem, lam, kappa, per_segment=1600):
    _, _, pieces = integrate_interior(problem, lam, dense=True)
    rs, ps, dps = [], [], []
    for k, (s_a, s_b, sol) in enumerate(pieces):
        s = np.linspace(s_a, s_b, _points(per_segment))
        if k > 0:
            s = s[1:]  # ψ and rψ' are continuous across breakpoints
        th, lr = sol(s)
        rho = np.exp(lr)
        r = np.exp(s)
        rs.append(r)
        ps.append(rho * np.sin(th))
        dps.append(rho * np.cos(th) / r)
    r = np.concatenate(rs)
    psi = np.concatenate(ps)
    dpsi = np.concatenate(dps)
    R, mu = problem.R, problem.mu
    norm = R**-mu / psi[-1]
    psi, dpsi = psi * norm, dpsi * norm
    # exterior samples, exact Bessel form
    x_end = max(10.0 * R, 30.0 / kappa)
    rext = np.geomspace(R, x_end, 200)[1:]
    kR = kappa * R
    ratio = special.kve(mu, kappa * rext) / special.kve(mu, kR) * np.exp(kR - kappa * rext)
    pext = ratio * R**-mu
    dext = -0.5 * kappa * (special.kve(abs(mu - 1), kappa * rext) + special.kve(mu + 1, kappa * rext)) \
        / special.kve(mu, kR) * np.exp(kR - kappa * rext) * R**-mu
    return (np.concatenate((r, rext)), np.concatenate((psi, pext)), np.concatenate((dpsi, dext)))


def count_nodes(problem: HalfLineProblem) -> int:
    """Zeros on (0, ∞) of the regular zero-energy solution (Sturm oscillation count)."""
    theta, logrho, _ = integrate_interior(problem, 0.0)
    inner = int(math.floor(theta / math.pi))
    # exterior: ψ = A r^μ + C r^-μ (or A ln r + C); an extra zero iff sign ψ(R) != sign A
    R, mu = problem.R, problem.mu
    psi, p = math.sin(theta), math.cos(theta)  # ψ and rψ' up to the common factor ρ
    if mu == 0.0:
        A = p
    else:
        A = (psi + p / mu) / (2.0 * R**mu)
    return inner + (1 if A * psi < 0.0 else 0)


# ---------------------------------------------------------------- finite elements


@njit(cache=True)
def _negative_pivots(kl, kr, cd, md, co, mo, lam):
    """Negative pivots of the LDLᵀ sweep of A - λM.

    A = stiffness (left/right element stiffnesses kl, kr) + small part (cd, co).
    Only the excess δ_i = d_i - kr_i is propagated, so the O(1/h) stiffness
    terms cancel algebraically instead of in floating point.
    """
    n = kl.shape[0]
    count = 0
    delta = kl[0] + cd[0] - lam * md[0]
    if kr[0] + delta < 0.0:
        count += 1
    for i in range(1, n):
        k = kl[i]
        eps = co[i - 1] - lam * mo[i - 1]
        prev = k + delta
        if prev == 0.0:
            prev = 1e-300
        delta = cd[i] - lam * md[i] + (k * delta + 2.0 * k * eps - eps * eps) / prev
        if kr[i] + delta < 0.0:
            count += 1
    return count


def tridiagonal_eigenvalues(diag, off, mdiag, moff, lo, hi, rtol=1e-14):
    """All eigenvalues in (lo, hi) of the symmetric tridiagonal pencil (A, M), by
    inertia bisection."""
    diag, off = np.asarray(diag, float), np.asarray(off, float)
    mdiag, moff = np.asarray(mdiag, float), np.asarray(moff, float)
    zeros = np.zeros_like(diag)
    count = lambda lam: int(_negative_pivots(zeros, zeros, diag, mdiag, off, moff, float(lam)))
    c_lo, c_hi = count(lo), count(hi)
    out = []
    for k in range(c_lo + 1, c_hi + 1):
        a, b = lo, hi  # invariant: count(a) < k <= count(b)
        while b - a > rtol * max(abs(a), abs(b), 1e-300):
            mid = 0.5 * (a + b)
            if count(mid) >= k:
                b = mid
            else:
                a = mid
        out.append(0.5 * (a + b))
    return out


@dataclass(frozen=True)
class GeometricMesh:
    """Nodes 0, r_min·σ^i (aligned with breakpoints) up to L."""

    r_min: float
    sigma: float
    L: float
    refine: int = 0  # element counts multiplied by 2**refine

    def nodes(self, breaks):
        pts = [self.r_min] + [b for b in breaks if self.r_min < b < self.L] + [self.L]
        out = [np.array([0.0])]
        h = math.log(self.sigma)
        for a, b in zip(pts[:-1], pts[1:]):
            n = max(1, math.ceil(math.log(b / a) / h - 1e-9)) * 2**self.refine
            out.append(np.exp(np.linspace(math.log(a), math.log(b), n + 1))[:-1])
        out.append(np.array([self.L]))
        return np.concatenate(out)


class Pencil:
    """Tridiagonal stiffness A and mass M for t[f] - α∫V f² on a mesh."""

    def __init__(self, problem: HalfLineProblem, nodes, robin=False, dirichlet_end=True, gauss=5):
        self.problem = problem
        self.nodes = nodes
        segs = problem.segment_polys()
        edges = np.array([s[1] for s in segs])
        x0, x1 = nodes[:-1], nodes[1:]
        h = x1 - x0
        gx, gw = np.polynomial.legendre.leggauss(gauss)
        t = 0.5 * (gx + 1.0)
        rq = x0[:, None] + h[:, None] * t
        mid = 0.5 * (x0 + x1)
        seg = np.searchsorted(edges, mid, side="left")
        q = np.empty_like(rq)
        mu2 = problem.mu**2
        for k, (_, _, c) in enumerate(segs):
            sel = seg == k
            if np.any(sel):
                q[sel] = P.polyval(rq[sel], c)
        q[seg >= len(segs)] = mu2
        # ∫ q/r φ_i φ_j dr on each element
        w = 0.5 * gw * h[:, None] * q / rq
        phi0, phi1 = 1.0 - t, t
        p00 = np.sum(w * phi0 * phi0, axis=1)
        p11 = np.sum(w * phi1 * phi1, axis=1)
        p01 = np.sum(w * phi0 * phi1, axis=1)
        k = (x0 + x1) / (2.0 * h)
        n = len(nodes)
        kl = np.concatenate(([0.0], k))
        kr = np.concatenate((k, [0.0]))
        cd = np.zeros(n)
        md = np.zeros(n)
        cd[:-1] += p00
        cd[1:] += p11
        md[:-1] += h * (3 * x0 + x1) / 12.0
        md[1:] += h * (x0 + 3 * x1) / 12.0
        mo = h * (x0 + x1) / 12.0
        if robin:
            cd[-1] += problem.mu
        first = 1 if problem.channel.m != 0 else 0
        last = n - 1 if dirichlet_end else n
        self.free = np.arange(first, last)
        sl = slice(first, last)
        so = slice(first, last - 1)
        self.kl, self.kr = kl[sl].copy(), kr[sl].copy()
        self.cd, self.md = cd[sl].copy(), md[sl].copy()
        self.co, self.mo = p01[so].copy(), mo[so].copy()
        self.ad = self.kl + self.kr + self.cd
        self.ao = -k[so] + self.co

    def count_below(self, lam):
        return int(_negative_pivots(self.kl, self.kr, self.cd, self.md, self.co, self.mo,
                                    float(lam)))

    def lower_bound(self):
        B, V = self.problem.setup.B, self.problem.V
        return -(B.max_abs() + abs(self.problem.alpha) * V.max_abs()) - 1.0

    def eigenvalue(self, k=1, rtol=1e-14):
        """k-th lowest negative eigenvalue by inertia bisection; None if fewer than k."""
        if self.count_below(0.0) < k:
            return None
        lo = self.lower_bound()
        while self.count_below(lo) >= k:
            lo *= 2.0
        hi = -1e-300  # invariant: count(lo) < k <= count(hi)
        # geometric bisection while the bracket spans more than a factor 4
        while lo / hi > 1.0 + rtol:
            mid = -math.sqrt(lo * hi) if lo / hi > 4.0 else 0.5 * (lo + hi)
            if self.count_below(mid) >= k:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    def eigenvector(self, lam):
        """Inverse iteration for the pencil eigenvector near lam (free nodes)."""
        n = len(self.ad)
        shift = lam * (1.0 + 1e-10) if lam != 0 else -1e-14
        ab = np.zeros((3, n))
        ab[0, 1:] = self.ao - shift * self.mo
        ab[1] = self.ad - shift * self.md
        ab[2, :-1] = self.ao - shift * self.mo
        x = np.ones(n)
        for _ in range(3):
            mx = self.md * x
            mx[:-1] += self.mo * x[1:]
            mx[1:] += self.mo * x[:-1]
            x = solve_banded((1, 1), ab, mx)
            x /= np.max(np.abs(x))
        full = np.zeros(len(self.nodes))
        full[self.free] = x
        return full


def fem_spectrum(problem: HalfLineProblem, mesh: GeometricMesh, max_eigs=8):
    """Negative eigenvalues (Dirichlet truncation at mesh.L) and the inertia at 0⁻."""
    pencil = Pencil(problem, mesh.nodes(problem.breaks()), robin=False, dirichlet_end=True)
    inertia = pencil.count_below(0.0)
    eigs = [pencil.eigenvalue(k) for k in range(1, min(inertia, max_eigs) + 1)]
    return eigs, inertia


def _richardson(values):
    """Extrapolate a sequence computed at mesh parameter h, h/2, ... with error in h², h⁴, ..."""
    table = [list(values)]
    for j in range(1, len(values)):
        f = 4.0**j
        prev = table[-1]
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1.0) for i in range(len(prev) - 1)])
    return table


def fem_lowest_at(problem: HalfLineProblem, L, r_min=None, sigma=1.02, levels=4):
    """Richardson-extrapolated lowest Dirichlet eigenvalue on (0, L)."""
    r_min = 1e-6 * problem.R if r_min is None else r_min
    vals = []
    for lev in range(levels):
        mesh = GeometricMesh(r_min, sigma, L, lev)
        pencil = Pencil(problem, mesh.nodes(problem.breaks()), dirichlet_end=True)
        lam = pencil.eigenvalue(1)
        if lam is None:
            return None, {}
        vals.append(lam)
    table = _richardson(vals)
    best = table[-1][0]
    err = abs(table[-1][0] - table[-2][-1])
    return best, {"raw": vals, "richardson_error": err, "nodes": len(mesh.nodes(problem.breaks()))}


def fem_lowest(problem: HalfLineProblem, kappa_est, tol=1e-8, sigma=1.02, levels=4,
               max_doublings=3) -> EigenResult:
    """Lowest eigenvalue by FEM, doubling the truncation radius L = 10/κ_est until converged."""
    L = max(10.0 / kappa_est, 2.0 * problem.R)
    prev, info = fem_lowest_at(problem, L, sigma=sigma, levels=levels)
    for _ in range(max_doublings):
        L *= 2.0
        cur, info = fem_lowest_at(problem, L, sigma=sigma, levels=levels)
        if prev is not None and cur is not None and abs(cur - prev) <= tol * abs(cur):
            info.update(L=L, sigma=sigma, levels=levels)
            kappa = math.sqrt(-cur)
            mesh = GeometricMesh(1e-6 * problem.R, sigma, L, levels - 1)
            nodes = mesh.nodes(problem.breaks())
            pencil = Pencil(problem, nodes, dirichlet_end=True)
            vec = pencil.eigenvector(pencil.eigenvalue(1))
            iR = int(np.searchsorted(nodes, problem.R))
            vec = vec * problem.R**-problem.mu / vec[iR]
            dvec = np.gradient(vec, nodes)
            return EigenResult(cur, kappa, "fem", nodes, vec, dvec, problem.mu, problem.R,
                               info, abs(cur - prev) / abs(cur))
        prev = cur
    raise TruncationError(f"FEM eigenvalue not converged after {max_doublings} doublings of L")


def count_negative(problem: HalfLineProblem, sigma=1.02, max_refine=4) -> int:
    """Number of negative eigenvalues, from the inertia of the pencil on [0, R] with the
    exact exterior closure μ|f(R)|² (converged under mesh refinement)."""
    if problem.alpha == 0.0:
        return 0
    prev = None
    for lev in range(max_refine):
        mesh = GeometricMesh(1e-6 * problem.R, sigma, problem.R, lev)
        pencil = Pencil(problem, mesh.nodes(problem.breaks()), robin=True, dirichlet_end=False)
        c = pencil.count_below(0.0)
        if c == prev:
            return c
        prev = c
    return prev


# ---------------------------------------------------------------- variational quantities


def bessel_AJ(mu, kappa, R):
    """(A(κ)/K_μ², J(κ)/K_μ²) at κR, in overflow-safe ratio form."""
    x = kappa * R
    k0 = special.kve(mu, x)
    if not np.isfinite(k0) or k0 == 0.0:
        raise BesselOverflowError(mu, x)
    r1 = special.kve(mu + 1.0, x) / k0
    r2 = special.kve(mu + 2.0, x) / k0
    rm = special.kve(abs(mu - 1.0), x) / k0
    if not all(np.isfinite(v) for v in (r1, r2, rm)):
        raise BesselOverflowError(mu + 2.0, x)
    A = 0.5 * x * x * (r2 - r1 * r1) - mu
    J = 0.5 * R * R * (rm * r1 - 1.0)
    return A, J


def bessel_AJ_raw(mu, kappa, R):
    """A(κ) and J(κ) themselves (not divided by K_μ²)."""
    A, J = bessel_AJ(mu, kappa, R)
    K2 = kv(mu, kappa * R) ** 2
    return A * K2, J * K2


def trial_quotient(problem: HalfLineProblem, kappa: float, psi0: ZeroMode):
    """(t[φ_κ], ‖φ_κ‖², Rayleigh quotient of T - αV) for the glued trial function φ_κ.

    kappa = 0 is allowed for μ > 1 (then φ_0 = ψ0 itself).
    """
    mu, R, alpha = problem.mu, problem.R, problem.alpha
    inner = psi0.norm_sq_upto(R)
    v = psi0.v_coeff
    if kappa == 0.0:
        if mu <= 1.0:
            raise ValueError("kappa = 0 only defines a trial function for mu > 1")
        form = 0.0
        norm = psi0.norm_sq
    else:
        A, J = bessel_AJ(mu, kappa, R)
        form = -mu * R ** (-2 * mu) + R ** (-2 * mu) * A
        norm = inner + R ** (-2 * mu) * J
    return form, norm, (form - alpha * v) / norm


def _romberg_simpson(f, s):
    fine = integrate.simpson(f, x=s)
    if (len(s) - 1) % 4 or len(s) < 9:
        return fine
    coarse = integrate.simpson(f[::2], x=s[::2])
    return (16.0 * fine - coarse) / 15.0


def local_energy_check(problem: HalfLineProblem, r, psi, dpsi, rtol=1e-8):
    """(lhs, rhs, holds) for ∫_0^R (ψ'² + Wψ²) r dr >= -μ ψ(R)².

    ``r`` must contain the sample grid of ``sample_grid`` (or an EigenResult's
    interior samples); integration is Simpson in s = ln r per segment, with one
    Richardson step when the point count allows it.
    """
    r = np.asarray(r)
    psi = np.asarray(psi)
    dpsi = np.asarray(dpsi)
    segs = problem.segment_polys(alpha=0.0)
    lhs = 0.0
    scale = 0.0
    for a, b, c in segs:
        sel = (r >= (a if a > 0 else 0.0)) & (r <= b)
        rr = r[sel]
        if len(rr) < 3:
            continue
        s = np.log(rr)
        p = rr * dpsi[sel]
        q = P.polyval(rr, c)
        f = p * p + q * psi[sel] ** 2
        lhs += _romberg_simpson(f, s)
        scale += _romberg_simpson(p * p + np.abs(q) * psi[sel] ** 2, s)
    iR = int(np.argmin(np.abs(r - problem.R)))
    rhs = -problem.mu * psi[iR] ** 2
    holds = lhs >= rhs - rtol * max(abs(rhs), scale)
    return lhs, rhs, bool(holds)
