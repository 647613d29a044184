"""
Trial functions and the upper bound
===================================

The zero mode glued to a Bessel K tail gives a Rayleigh quotient that bounds the
eigenvalue from above; the optimal kappa makes the bound asymptotically sharp.
"""
import numpy as np

from pauli_weakbind import (Channel, HalfLineProblem, channel_potential, optimal_kappa,
                            uniform_setup, zero_mode)
from pauli_weakbind.halfline import shoot_eigenvalue, trial_quotient

s = uniform_setup(3.0)
ch = Channel(-1, -1)
w = zero_mode(s, ch)
print(f"channel {ch}, mu = {w.tail_mu:g}, v = {w.v_coeff:.6f}")
print("  alpha    lambda           quotient         gap")
for alpha in (0.1, 0.03, 0.01, 0.003):
    pr = HalfLineProblem(channel_potential(s, ch), alpha)
    k = optimal_kappa(w.tail_mu, w.v_coeff, alpha)
    q = trial_quotient(pr, k, w)[2]
    lam = shoot_eigenvalue(pr, (0.3 * k, 3 * k), samples=False).lam
    print(f"  {alpha:<7g}  {lam:<15.8e}  {q:<15.8e}  {(q - lam) / abs(lam):.3e}")

# scanning kappa shows the quotient is minimised near the predicted value
pr = HalfLineProblem(channel_potential(s, ch), 0.01)
k_star = optimal_kappa(w.tail_mu, w.v_coeff, 0.01)
for f in (0.25, 0.5, 1.0, 2.0, 4.0):
    print(f"  kappa = {f:<4g} kappa*: quotient {trial_quotient(pr, f * k_star, w)[2]:.8e}")

# for mu > 1 the zero mode itself is normalisable and kappa = 0 is allowed
s25 = uniform_setup(5.0)
w25 = zero_mode(s25, Channel(0, -1))
pr25 = HalfLineProblem(channel_potential(s25, Channel(0, -1)), 0.01)
print("mu = 2.5, kappa = 0:", trial_quotient(pr25, 0.0, w25)[2], " -alpha v / |w|^2 =",
      -0.01 * w25.v_coeff / w25.norm_sq)
lam = shoot_eigenvalue(pr, (1e-4, 1.0), samples=False).lam
print("quotient >= lambda on a 30-point kappa grid:",
      all(trial_quotient(pr, k, w)[2] >= lam for k in np.geomspace(1e-4, 1.0, 30)))
