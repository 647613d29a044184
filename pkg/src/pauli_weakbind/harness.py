"""α-sweeps per channel, comparison with the leading laws, remainder fits and counts."""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import DomainError, optimal_kappa, predict_halfline
from .channels import (EXPONENTIAL, LOG, Channel, channel_potential, regime_for,
                       virtual_channels, zero_mode)
from .fields import FieldSetup
from .halfline import (HalfLineProblem, count_negative, fem_lowest, local_energy_check,
                       shoot_eigenvalue, trial_quotient)
from .hardy import certify_setup

log = logging.getLogger(__name__)

THREADS_ENV = "PAULI_WEAKBIND_THREADS"
FEM_KAPPA_FLOOR = 1e-7  # FEM is skipped when the predicted κ < FEM_KAPPA_FLOOR / R
KAPPA_UNDERFLOW = 1e-150  # λ = -κ² must stay a normal double
METHODS = ("shoot", "fem", "both")


class InsufficientDataError(ValueError):
    pass


def worker_count(requested: int | None = None) -> int:
    """Worker threads: ``requested`` capped by PAULI_WEAKBIND_THREADS (0 or unset = auto)."""
    auto = os.cpu_count() or 1
    try:
        cap = int(os.environ.get(THREADS_ENV, "0"))
    except ValueError:
        log.warning("ignoring non-integer %s", THREADS_ENV)
        cap = 0
    cap = auto if cap <= 0 else cap
    n = auto if not requested or requested <= 0 else requested
    return max(1, min(n, cap))


def default_alphas(regime: str, per_decade: int = 8) -> list:
    """Geometric α grid, decreasing."""
    lo, hi = (5e-2, 5e-1) if regime == EXPONENTIAL else (1e-3, 1e-1)
    n = int(round(per_decade * math.log10(hi / lo))) + 1
    return [float(a) for a in np.geomspace(hi, lo, n)]


def setup_summary(setup: FieldSetup) -> dict:
    return {"flux": setup.flux, "N": setup.N, "Nprime": setup.Nprime, "R": setup.R,
            "integer_flux": setup.integer_flux, "mu_frac": setup.mu_frac}


@dataclass
class SweepRow:
    channel: Channel
    alpha: float
    lambda_numeric: float
    lambda_predicted: float
    ratio: float
    method: str
    residual: float
    regime: str = ""
    mu: float = math.nan
    v: float = math.nan
    trial_quotient: float = math.nan
    energy_ok: bool | None = None
    cross_method: float = math.nan  # |λ_shoot - λ_fem| / |λ| when both ran
    note: str = ""
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class FitResult:
    channel: Channel
    exponent: float
    goodness: float
    alpha_min: float
    alpha_max: float
    constant: float = math.nan  # log regime: max |ratio - 1| |ln α| / ln|ln α|

    def __iter__(self):
        return iter((self.exponent, self.goodness))


@dataclass
class SweepReport:
    setup: dict
    rows: list = field(default_factory=list)
    fits: list = field(default_factory=list)
    count_table: list = field(default_factory=list)  # (alpha, total, Nprime)

    def channel_rows(self, channel: Channel, successful=True):
        return [r for r in self.rows if r.channel == channel and (r.ok or not successful)]

    @property
    def channels(self):
        return sorted({r.channel for r in self.rows})


def exponential_ratio(lam: float, alpha: float, v: float) -> float:
    """α ln|λ| / (-2/v): the exponential law compared on the logarithmic scale."""
    return alpha * math.log(-lam) / (-2.0 / v)


def _kappa_guess(pred) -> float:
    return math.exp(0.5 * pred.log_abs_lambda)


def solve_row(setup: FieldSetup, channel: Channel, alpha: float, method: str = "shoot",
              mode=None, fem_options: dict | None = None) -> SweepRow:
    """One sweep row; solver failures are recorded in the row.

    ``fem_options`` go to :func:`fem_lowest` (tol, sigma, levels).
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    mode = zero_mode(setup, channel) if mode is None else mode
    mu = mode.tail_mu
    row = SweepRow(channel, alpha, math.nan, math.nan, math.nan, method, math.nan, mu=mu,
                   v=mode.v_coeff)
    try:
        pred = predict_halfline(mu, mode.v_coeff, alpha, mode.norm_sq, channel)
    except DomainError as exc:
        row.error = f"prediction: {exc}"
        return row
    row.regime = pred.regime
    row.lambda_predicted = pred.lambda_leading
    problem = HalfLineProblem(channel_potential(setup, channel), alpha)
    k_pred = _kappa_guess(pred)
    if not k_pred > KAPPA_UNDERFLOW / setup.R:
        row.error = (f"predicted kappa = exp({0.5 * pred.log_abs_lambda:.6g}) is below the "
                     "representable range; choose a larger alpha")
        return row
    fem_ok = k_pred >= FEM_KAPPA_FLOOR / setup.R
    try:
        shoot = None
        if method in ("shoot", "both") or not fem_ok:
            shoot = shoot_eigenvalue(problem, (0.5 * k_pred, 2.0 * k_pred))
        fem = None
        if method in ("fem", "both") and fem_ok:
            fem = fem_lowest(problem, shoot.kappa if shoot is not None else k_pred,
                             **(fem_options or {}))
        elif method != "shoot":
            row.note = "fem skipped: predicted kappa below the truncation floor"
            row.method = "shoot"
        best = shoot if shoot is not None else fem
        row.lambda_numeric = best.lam
        if shoot is not None and fem is not None:
            row.cross_method = abs(shoot.lam - fem.lam) / abs(shoot.lam)
            row.residual = row.cross_method
        else:
            row.residual = best.match_residual
        if shoot is not None:
            inner = shoot.r <= problem.R * (1.0 + 1e-12)
            _, _, row.energy_ok = local_energy_check(problem, shoot.r[inner], shoot.psi[inner],
                                                     shoot.dpsi[inner])
    except Exception as exc:  # recorded, never aborts the sweep
        row.error = f"{type(exc).__name__}: {exc}"
        return row
    if pred.regime == EXPONENTIAL:
        row.ratio = exponential_ratio(row.lambda_numeric, alpha, mode.v_coeff)
    else:
        row.ratio = row.lambda_numeric / row.lambda_predicted
    if mode.is_virtual:
        try:
            kappa = 0.0 if mu > 1.0 else optimal_kappa(mu, mode.v_coeff, alpha)
            row.trial_quotient = trial_quotient(problem, kappa, mode)[2]
        except (ArithmeticError, ValueError) as exc:
            row.note = (row.note + "; " if row.note else "") + f"trial quotient: {exc}"
    return row


def sweep(setup: FieldSetup, alphas, channels=None, method: str = "shoot",
          workers: int | None = None, count_alphas=(), m_max: int = 16,
          fem_options: dict | None = None) -> SweepReport:
    """Rows for every (channel, α); channels default to the virtual channels.

    ``alphas=None`` uses each channel's default grid for its regime.
    """
    if alphas is not None:
        alphas = [float(a) for a in alphas]
        if any(a <= 0.0 for a in alphas):
            raise ValueError("alphas must be positive")
        if any(b >= a for a, b in zip(alphas[:-1], alphas[1:])):
            raise ValueError("alphas must be strictly decreasing")
    if channels is None:
        channels = [ch for ch, _, _ in virtual_channels(setup)]
    channels = sorted(set(channels))
    modes = {ch: zero_mode(setup, ch) for ch in channels}
    grids = {ch: alphas if alphas is not None else default_alphas(regime_for(modes[ch].tail_mu))
             for ch in channels}
    tasks = [(ch, a) for ch in channels for a in grids[ch]]
    n = worker_count(workers)
    if n == 1 or len(tasks) <= 1:
        rows = [solve_row(setup, ch, a, method, modes[ch], fem_options) for ch, a in tasks]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(
                lambda t: solve_row(setup, t[0], t[1], method, modes[t[0]], fem_options), tasks))
    rows.sort(key=lambda r: (r.channel, r.alpha))
    report = SweepReport(setup_summary(setup), rows)
    for ch in channels:
        try:
            report.fits.append(fit_remainder(report, ch))
        except InsufficientDataError:
            pass
    for a in count_alphas:
        total, expected = count_check(setup, a, m_max)
        report.count_table.append((float(a), total, expected))
    return report


def _linear_fit(x, y):
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    goodness = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), goodness


def fit_remainder(report: SweepReport, channel: Channel) -> FitResult:
    """Least-squares exponent of |ratio - 1| against α (or against ln|ln α|/|ln α|
    in the log regime)."""
    rows = [r for r in report.channel_rows(channel) if r.ratio != 1.0]
    if len(rows) < 4:
        raise InsufficientDataError(
            f"{channel}: {len(rows)} successful rows, at least 4 are needed")
    a = np.array([r.alpha for r in rows])
    dev = np.abs(np.array([r.ratio for r in rows]) - 1.0)
    constant = math.nan
    if rows[0].regime == LOG:
        la = np.abs(np.log(a))
        scale = np.log(la) / la
        x = np.log(scale)
        constant = float(np.max(dev / scale))
    else:
        x = np.log(a)
    slope, goodness = _linear_fit(x, np.log(dev))
    return FitResult(channel, slope, goodness, float(a.min()), float(a.max()), constant)


def count_check(setup: FieldSetup, alpha: float, m_max: int = 16, alpha_c: float | None = None):
    """(Σ_{|m| <= m_max, ±} count_negative, Nprime)."""
    if alpha_c is None:
        alpha_c = certify_setup(setup, max(m_max, math.ceil(abs(setup.flux_class) + 2))).alpha_c
    if alpha > alpha_c:
        raise ValueError(f"alpha = {alpha} exceeds the certified threshold {alpha_c}")
    total = 0
    for m in range(-m_max, m_max + 1):
        for spin in (1, -1):
            total += count_negative(HalfLineProblem(channel_potential(setup, Channel(m, spin)),
                                                    alpha))
    return total, setup.Nprime


def channel_eigenvalues(setup: FieldSetup, channel: Channel, alpha: float, count: int):
    """The ``count`` lowest eigenvalues of one channel by shooting."""
    problem = HalfLineProblem(channel_potential(setup, channel), alpha)
    mode = zero_mode(setup, channel)
    try:
        pred = predict_halfline(mode.tail_mu, mode.v_coeff, alpha, mode.norm_sq)
        k = _kappa_guess(pred)
        bracket = (0.5 * k, 2.0 * k)
    except DomainError:
        bracket = None
    out = []
    top = math.sqrt(setup.B.max_abs() + alpha * setup.V.max_abs()) + 1.0
    for k in range(1, count + 1):
        if k == 1 and bracket is not None and mode.is_virtual:
            res = shoot_eigenvalue(problem, bracket, samples=False, index=k)
        else:
            # well-bound state: κ between 1e-8/R and the potential depth
            res = shoot_eigenvalue(problem, (1e-8 / setup.R, top), samples=False, index=k)
        out.append(res.lam)
    return out


def negative_spectrum(setup: FieldSetup, alpha: float, m_max: int = 16):
    """Sorted negative eigenvalues over channels |m| <= m_max, as (λ, channel) pairs."""
    spec = []
    for m in range(-m_max, m_max + 1):
        for spin in (1, -1):
            ch = Channel(m, spin)
            c = count_negative(HalfLineProblem(channel_potential(setup, ch), alpha))
            if c:
                spec.extend((lam, ch) for lam in channel_eigenvalues(setup, ch, alpha, c))
    spec.sort(key=lambda t: t[0])
    return spec


def conjugation_check(setup: FieldSetup, alpha: float, m_max: int = 16, rtol: float = 1e-8) -> bool:
    """Negative spectra for B and -B agree, channel (m, s) mapping to (-m, -s)."""
    a = negative_spectrum(setup, alpha, m_max)
    b = negative_spectrum(setup.reflected(), alpha, m_max)
    if len(a) != len(b):
        return False
    for (la, ca), (lb, cb) in zip(a, b):
        if abs(la - lb) > rtol * abs(la):
            return False
    mapped_a = sorted((ch.conjugate(), lam) for lam, ch in a)
    mapped_b = sorted((ch, lam) for lam, ch in b)
    return [c for c, _ in mapped_a] == [c for c, _ in mapped_b]


def concavity_check(setup: FieldSetup, channel: Channel, alpha1: float, alpha2: float,
                    rtol: float = 1e-9) -> bool:
    """Midpoint test λ((α1+α2)/2) >= (λ(α1) + λ(α2))/2 for the lowest eigenvalue."""
    mid = 0.5 * (alpha1 + alpha2)
    mode = zero_mode(setup, channel)
    lams = []
    for a in (alpha1, mid, alpha2):
        row = solve_row(setup, channel, a, "shoot", mode)
        if not row.ok:
            raise RuntimeError(row.error)
        lams.append(row.lambda_numeric)
    avg = 0.5 * (lams[0] + lams[2])
    return lams[1] >= avg - rtol * abs(avg)

