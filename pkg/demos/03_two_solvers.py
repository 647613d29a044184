"""
Shooting against finite elements
================================

The same channel eigenvalue from the Prüfer-angle shooting method and from
Richardson-extrapolated P1 finite elements.
"""
import math

from pauli_weakbind import Channel, HalfLineProblem, channel_potential, uniform_setup
from pauli_weakbind.halfline import count_negative, fem_lowest, shoot_eigenvalue

s = uniform_setup(3.0)
pr = HalfLineProblem(channel_potential(s, Channel(-1, -1)), 0.05)

sh = shoot_eigenvalue(pr, (1e-3, 1.0))
fe = fem_lowest(pr, sh.kappa)
print(f"shoot  lambda = {sh.lam:.15e}")
print(f"fem    lambda = {fe.lam:.15e}  (L = {fe.mesh_info['L']:.4g}, {fe.mesh_info['nodes']} nodes)")
print(f"relative difference {abs(sh.lam - fe.lam) / abs(sh.lam):.2e}")

# the eigenfunction is normalised to R^-mu at R and is a pure Bessel K outside
print(f"psi(R) R^mu = {sh.psi[sh.r.searchsorted(s.R)] * s.R ** pr.mu:.12f}")
print(f"exterior shape error {sh.exterior_shape_error():.1e}")

# deeper wells hold several states; shooting by index finds the excited ones
deep = HalfLineProblem(channel_potential(uniform_setup(0.0), Channel(0, 1)), 50.0)
n = count_negative(deep)
lams = [shoot_eigenvalue(deep, (1e-6, math.sqrt(50.0)), samples=False, index=k).lam
        for k in range(1, n + 1)]
print(f"alpha = 50, W = 0: {n} bound states", ", ".join(f"{x:.6g}" for x in lams))
