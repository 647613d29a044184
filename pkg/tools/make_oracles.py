"""Regenerate src/pauli_weakbind/data/special_oracles.json.

Values come from arbitrary-precision series and products evaluated with mpmath
arithmetic only (no library gamma or Bessel routines):

* Gamma: shift x up by a rising-factorial product, then the Stirling series
  with Bernoulli-number corrections.
* K_nu, non-integer nu: pi/2 (I_-nu - I_nu) / sin(nu pi) with power series for I.
* K_n, integer n: the logarithmic series with harmonic numbers.
"""
import json
import pathlib

import mpmath as mp

GUARD = 40


def gamma_series(x):
    x = mp.mpf(x)
    shift = 60
    prod = mp.mpf(1)
    for k in range(shift):
        prod *= x + k
    z = x + shift
    s = (z - mp.mpf(1) / 2) * mp.log(z) - z + mp.log(2 * mp.pi) / 2
    for k in range(1, 40):
        s += mp.bernoulli(2 * k) / (2 * k * (2 * k - 1) * z ** (2 * k - 1))
    return mp.exp(s) / prod


def bessel_i_series(nu, x):
    q = (x / 2) ** 2
    term = (x / 2) ** nu / gamma_series_any(nu + 1)
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (nu + k))
        total += term
        if abs(term) < abs(total) * mp.mpf(10) ** (-mp.mp.dps):
            return total


def gamma_series_any(a):
    """Gamma for any non-pole real a via the reflection formula."""
    if a > 0:
        return gamma_series(a)
    return mp.pi / (mp.sin(mp.pi * a) * gamma_series(1 - a))


def bessel_k_series(nu, x):
    nu = mp.mpf(nu)
    x = mp.mpf(x)
    n = int(nu)
    if nu != n:
        return mp.pi / 2 * (bessel_i_series(-nu, x) - bessel_i_series(nu, x)) / mp.sin(nu * mp.pi)
    h = x / 2
    q = h * h
    finite = mp.mpf(0)
    for k in range(n):
        finite += mp.factorial(n - k - 1) / mp.factorial(k) * (-q) ** k
    finite *= h ** (-n) / 2
    euler = mp.euler
    harm = [mp.mpf(0)]
    for k in range(1, 4000):
        harm.append(harm[-1] + mp.mpf(1) / k)
    log_part = (-1) ** (n + 1) * mp.log(h) * bessel_i_series(n, x)
    tail = mp.mpf(0)
    k = 0
    while True:
        psi_sum = (-euler + harm[k]) + (-euler + harm[n + k])
        term = psi_sum * q**k / (mp.factorial(k) * mp.factorial(n + k))
        tail += term
        if k > 10 and abs(term) < abs(tail) * mp.mpf(10) ** (-mp.mp.dps):
            break
        k += 1
    tail *= (-1) ** n * h**n / 2
    return finite + log_part + tail


def main():
    gamma_x = [mp.mpf(i) / 8 for i in range(1, 161, 4)] + [mp.mpf(v) for v in
                                                           ("0.001", "0.3333", "2.5", "7.25", "11.5", "13.1", "15.75", "17.0", "19.5", "20.0")]
    orders = ["0", "0.3", "0.5", "1", "1.5", "2", "2.5", "3.7", "5", "10"]
    xs = ["0.001", "0.1", "1", "5", "30"]
    out = {"gamma": [], "bessel_k": []}
    mp.mp.dps = 50
    for x in gamma_x:
        g = gamma_series(x)
        assert abs(g / mp.gamma(x) - 1) < mp.mpf(10) ** -40
        out["gamma"].append([mp.nstr(x, 25), mp.nstr(g, 25)])
    for nu in orders:
        for x in xs:
            mp.mp.dps = 50 + int(float(x) * 0.9) + GUARD
            k = bessel_k_series(mp.mpf(nu), mp.mpf(x))
            mp.mp.dps = 50
            assert abs(k / mp.besselk(mp.mpf(nu), mp.mpf(x)) - 1) < mp.mpf(10) ** -30, (nu, x)
            out["bessel_k"].append([nu, x, mp.nstr(k, 25)])
    path = pathlib.Path(__file__).resolve().parents[1] / "src/pauli_weakbind/data/special_oracles.json"
    path.write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote {len(out['gamma'])} gamma and {len(out['bessel_k'])} K values to {path}")


if __name__ == "__main__":
    main()
