"""
Four weak-coupling laws
=======================

Sweeps of the lowest eigenvalue against the leading asymptotic law in each
regime: power (flux 1.5), logarithmic and exponential (flux 1), linear (flux 2.5).
"""
from pauli_weakbind import Channel, sweep, uniform_setup

cases = [
    ("power", 3.0, Channel(-1, -1), [0.1, 0.03, 0.01, 0.003]),
    ("log", 2.0, Channel(0, -1), [0.1, 0.03, 0.01, 0.003, 0.001]),
    ("exponential", 2.0, Channel(-1, -1), [0.5, 0.3, 0.2, 0.1, 0.05]),
    ("linear", 5.0, Channel(0, -1), [0.1, 0.03, 0.01, 0.003, 0.001]),
]

for name, B0, ch, alphas in cases:
    rep = sweep(uniform_setup(B0), alphas, channels=[ch])
    print(f"\n{name} regime, channel {ch}, mu = {rep.rows[0].mu:g}")
    print("  alpha      lambda            predicted         ratio")
    for row in sorted(rep.rows, key=lambda r: -r.alpha):
        print(f"  {row.alpha:<9g}  {row.lambda_numeric:<16.9e}  {row.lambda_predicted:<16.9e}"
              f"  {row.ratio:.6f}")
    for fit in rep.fits:
        extra = f", C = {fit.constant:.3f}" if fit.constant == fit.constant else ""
        print(f"  remainder exponent {fit.exponent:.3f} (R^2 {fit.goodness:.5f}){extra}")

# in the exponential regime the ratio compares alpha ln|lambda| with -2/v,
# since lambda itself is e^-40 at alpha = 0.05
