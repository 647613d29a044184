"""The acceptance suite: each check returns a CriterionResult with a one-line summary."""
from __future__ import annotations

import functools
import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy import integrate, special

from .channels import Channel, channel_potential, virtual_channels, zero_mode
from .fields import uniform_setup
from .halfline import HalfLineProblem, bessel_AJ_raw, count_negative
from .harness import (concavity_check, conjugation_check, count_check, default_alphas,
                      fit_remainder, sweep)
from .hardy import certify_setup
from .specfun import bessel_k, c_mu, gamma

FLUX_FIELDS = {0.0: 0.0, 1.0: 2.0, 1.5: 3.0, 2.5: 5.0}  # flux -> uniform B on [0, 1]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number} ({self.title}): {self.detail} [{self.seconds:.1f}s]"


def _setup_for_flux(phi):
    return uniform_setup(FLUX_FIELDS[phi])


@functools.lru_cache(maxsize=None)
def _sweep(B0, channels, alphas, method):
    return sweep(uniform_setup(B0), list(alphas), list(channels), method)


def _power_rows():
    return _sweep(3.0, (Channel(-1, -1),), (0.1, 0.03, 0.01, 0.003), "shoot")


def _log_rows():
    return _sweep(2.0, (Channel(0, -1),), tuple(default_alphas("log")), "shoot")


def _exp_rows():
    return _sweep(2.0, (Channel(-1, -1),), tuple(default_alphas("exponential")), "shoot")


def _linear_rows():
    return _sweep(5.0, (Channel(0, -1), Channel(-1, -1)), tuple(default_alphas("linear")),
                  "shoot")


def _failed(report):
    return [f"{r.channel}@{r.alpha:.3g}: {r.error}" for r in report.rows if not r.ok]


# ---------------------------------------------------------------- criteria


def criterion_1() -> CriterionResult:
    data = json.loads(resources.files("pauli_weakbind").joinpath(
        "data/special_oracles.json").read_text())
    g_err = max(abs(gamma(float(x)) / float(v) - 1.0) for x, v in data["gamma"])
    k_err = max(abs(bessel_k(float(n), float(x)).value / float(v) - 1.0)
                for n, x, v in data["bessel_k"])
    c_err = abs(c_mu(0.5) - 1.0)
    ok = g_err <= 1e-10 and k_err <= 1e-10 and c_err <= 1e-14
    return CriterionResult(1, "special-function oracles", ok,
                           f"max rel err gamma {g_err:.2e} ({len(data['gamma'])} pts), "
                           f"K {k_err:.2e} ({len(data['bessel_k'])} pts), |c_mu(0.5)-1| = {c_err:.1e}",
                           {"gamma": g_err, "bessel_k": k_err, "c_half": c_err})


def criterion_2() -> CriterionResult:
    rep = _power_rows()
    rows = rep.channel_rows(Channel(-1, -1))
    bad = _failed(rep)
    devs = {r.alpha: abs(r.ratio - 1.0) for r in rows}
    within = all(devs[a] <= 5.0 * a for a in devs) and len(devs) == 4
    expo, good = fit_remainder(rep, Channel(-1, -1)) if len(rows) >= 4 else (math.nan, math.nan)
    ok = within and not bad and 0.7 <= expo <= 1.3
    detail = ", ".join(f"a={a:g}: |r-1|={d:.2e}" for a, d in sorted(devs.items(), reverse=True))
    return CriterionResult(2, "power regime, flux 1.5, (-1,-)", ok,
                           f"{detail}; fitted exponent {expo:.3f} (R^2 {good:.4f})"
                           + (f"; errors {bad}" if bad else ""),
                           {"deviations": devs, "exponent": expo})


def criterion_3() -> CriterionResult:
    s = uniform_setup(2.0)
    v = zero_mode(s, Channel(0, -1)).v_coeff
    v_err = abs(v / ((math.e - 1.0) / 2.0) - 1.0)
    rep = _log_rows()
    rows = rep.channel_rows(Channel(0, -1))
    fit = fit_remainder(rep, Channel(0, -1))
    ok = (fit.constant <= 10.0 and v_err < 1e-10 and not _failed(rep)
          and len(rows) == len(default_alphas("log")))
    return CriterionResult(3, "log regime, flux 1, (0,-)", ok,
                           f"{len(rows)} alphas in [1e-3, 1e-1], fitted C = {fit.constant:.3f} "
                           f"(<= 10), v rel err {v_err:.1e}",
                           {"C": fit.constant, "v_err": v_err})


def criterion_4() -> CriterionResult:
    s = uniform_setup(2.0)
    v = zero_mode(s, Channel(-1, -1)).v_coeff
    rep = _exp_rows()
    rows = sorted(rep.channel_rows(Channel(-1, -1)), key=lambda r: -r.alpha)
    d = [abs(r.alpha * math.log(-r.lambda_numeric) + 2.0 / v) for r in rows]
    shoot_only = all(r.method == "shoot" for r in rows)
    # bounded and not growing as alpha decreases: no deviation exceeds the largest-alpha one
    non_growing = bool(d) and all(x <= d[0] * (1.0 + 1e-6) for x in d)
    ok = shoot_only and non_growing and not _failed(rep) and len(rows) == len(default_alphas("exponential"))
    return CriterionResult(4, "exponential regime, flux 1, (-1,-)", ok,
                           f"|a ln|lam| + 2/v| from {d[0]:.3e} (a=0.5) to {d[-1]:.3e} (a=0.05); "
                           f"C' = {max(d):.3e}; non-growing {non_growing}",
                           {"deviations": d})


def criterion_5() -> CriterionResult:
    rep = _linear_rows()
    parts = []
    ok = not _failed(rep)
    per_channel = {}
    for ch in (Channel(0, -1), Channel(-1, -1)):
        rows = rep.channel_rows(ch)
        viol = [r.alpha for r in rows if abs(r.ratio - 1.0) > 5.0 * r.alpha]
        worst = max(abs(r.ratio - 1.0) / r.alpha for r in rows)
        expo = fit_remainder(rep, ch).exponent
        per_channel[str(ch)] = {"violations": viol, "max_dev_over_alpha": worst, "exponent": expo}
        ok = ok and not viol
        parts.append(f"{ch} mu={rows[0].mu:g}: max |r-1|/a = {worst:.3g}, exponent {expo:.2f}, "
                     f"{len(viol)} of {len(rows)} alphas exceed 5a")
    return CriterionResult(5, "linear regime, flux 2.5", ok, "; ".join(parts), per_channel)


def criterion_6() -> CriterionResult:
    parts = []
    ok = True
    metrics = {}
    for phi in FLUX_FIELDS:
        s = _setup_for_flux(phi)
        cert = certify_setup(s, 16)
        alpha = min(1e-2, cert.alpha_c / 2.0)
        total, expected = count_check(s, alpha, 16, alpha_c=cert.alpha_c)
        certified = all(c.alpha_threshold > 0.0 for c in cert.per_channel)
        good = total == expected and certified and cert.alpha_c > 0.0 and cert.decay_ok
        ok = ok and good
        metrics[phi] = {"alpha_c": cert.alpha_c, "alpha": alpha, "total": total,
                        "Nprime": expected}
        parts.append(f"flux {phi:g}: {total}/{expected} (alpha_c {cert.alpha_c:.3f})")
    return CriterionResult(6, "eigenvalue counts over |m| <= 16", ok, "; ".join(parts), metrics)


def _cross_reports():
    alphas = (0.1, 0.03, 0.01, 0.003)
    return [
        _sweep(3.0, (Channel(-1, -1), Channel(0, -1)), alphas, "both"),
        _sweep(2.0, (Channel(0, -1),), alphas, "both"),
        _sweep(5.0, (Channel(0, -1), Channel(-1, -1), Channel(-2, -1)), alphas, "both"),
        _sweep(0.0, (Channel(0, 1),), (0.5, 0.3), "both"),
    ]


def criterion_7() -> CriterionResult:
    rows = [r for rep in _cross_reports() for r in rep.rows]
    both = [r for r in rows if r.ok and r.method == "both"]
    worst = max(r.cross_method for r in both)
    ok = len(both) >= 20 and worst <= 1e-6 and all(r.ok for r in rows)
    return CriterionResult(7, "shooting vs FEM", ok,
                           f"{len(both)} cases, max relative difference {worst:.2e}",
                           {"cases": len(both), "worst": worst})


def _all_reports():
    return [_power_rows(), _log_rows(), _exp_rows(), _linear_rows()] + _cross_reports()


def criterion_8() -> CriterionResult:
    rows = [r for rep in _all_reports() for r in rep.rows if r.ok]
    viol = [f"{r.channel}@{r.alpha:g}" for r in rows
            if not (r.trial_quotient >= r.lambda_numeric)]
    power = sorted(_power_rows().channel_rows(Channel(-1, -1)), key=lambda r: -r.alpha)
    gaps = [(r.trial_quotient - r.lambda_numeric) / abs(r.lambda_numeric) for r in power]
    shrinking = all(b < a for a, b in zip(gaps[:-1], gaps[1:]))
    ok = not viol and shrinking
    return CriterionResult(8, "variational upper bound", ok,
                           f"{len(rows) - len(viol)}/{len(rows)} rows with quotient >= lambda; "
                           f"power-regime relative gaps " + ", ".join(f"{g:.2e}" for g in gaps),
                           {"violations": viol, "gaps": gaps})


def criterion_9() -> CriterionResult:
    rows = [r for rep in _all_reports() for r in rep.rows if r.ok]
    energy_bad = [f"{r.channel}@{r.alpha:g}" for r in rows if r.energy_ok is False]
    energy_n = sum(1 for r in rows if r.energy_ok is not None)
    concave = []
    for B0, ch, (a1, a2) in [(3.0, Channel(-1, -1), (0.01, 0.03)),
                             (3.0, Channel(0, -1), (0.01, 0.03)),
                             (2.0, Channel(0, -1), (0.003, 0.01)),
                             (2.0, Channel(-1, -1), (0.2, 0.3)),
                             (5.0, Channel(0, -1), (0.01, 0.03)),
                             (5.0, Channel(-1, -1), (0.01, 0.03)),
                             (5.0, Channel(-2, -1), (0.01, 0.03)),
                             (0.0, Channel(0, 1), (0.3, 0.5)),
                             (0.0, Channel(0, -1), (0.3, 0.5))]:
        concave.append(concavity_check(uniform_setup(B0), ch, a1, a2))
    conj = {phi: conjugation_check(_setup_for_flux(phi), 0.01) for phi in FLUX_FIELDS}
    unique = {}
    for phi in FLUX_FIELDS:
        s = _setup_for_flux(phi)
        for ch, _, _ in virtual_channels(s):
            for a in (0.01, 0.001):
                unique[(phi, str(ch), a)] = count_negative(
                    HalfLineProblem(channel_potential(s, ch), a))
    uniq_ok = all(c == 1 for c in unique.values())
    ok = not energy_bad and all(concave) and all(conj.values()) and uniq_ok
    return CriterionResult(9, "inequality suite", ok,
                           f"energy check {energy_n - len(energy_bad)}/{energy_n}; concavity "
                           f"{sum(concave)}/{len(concave)}; conjugation "
                           f"{sum(conj.values())}/{len(conj)}; single eigenvalue in "
                           f"{sum(c == 1 for c in unique.values())}/{len(unique)} virtual cases",
                           {"energy_bad": energy_bad, "conjugation": conj})


def _exterior_quadrature(mu, kappa, R):
    """∫_R^∞ (κ²K_μ'(κr)² + μ²r⁻²K_μ(κr)²) r dr and ∫_R^∞ K_μ(κr)² r dr, in t = ln(r/R)."""
    def form(t):
        r = R * math.exp(t)
        z = kappa * r
        kp = -0.5 * (special.kv(abs(mu - 1.0), z) + special.kv(mu + 1.0, z))
        return (kappa**2 * kp**2 + mu**2 / r**2 * special.kv(mu, z) ** 2) * r * r

    def mass(t):
        r = R * math.exp(t)
        return special.kv(mu, kappa * r) ** 2 * r * r

    edges = np.linspace(0.0, math.log(60.0 / (kappa * R)), 41)
    tot = []
    for f in (form, mass):
        tot.append(sum(integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-13, limit=200)[0]
                       for a, b in zip(edges[:-1], edges[1:])))
    return tot


def criterion_10() -> CriterionResult:
    R = 2.0
    worst = 0.0
    n = 0
    for mu in (0.0, 0.3, 0.5, 0.9, 1.0):
        for x in np.geomspace(1e-3, 1.0, 7):
            kappa = x / R
            A, J = bessel_AJ_raw(mu, kappa, R)
            qa, qj = _exterior_quadrature(mu, kappa, R)
            worst = max(worst, abs(A / qa - 1.0), abs(J / qj - 1.0))
            n += 1
    return CriterionResult(10, "closed-form Bessel identities", worst <= 1e-8,
                           f"{n} (mu, kappa R) pairs, max relative difference {worst:.2e}",
                           {"worst": worst})


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


def run_criterion(number: int) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        res = CRITERIA[number]()
    except Exception as exc:  # a crash is a failure, reported as such
        res = CriterionResult(number, "error", False, f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def run_all(numbers=None, echo=print):
    out = []
    for k in numbers or sorted(CRITERIA):
        res = run_criterion(k)
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
