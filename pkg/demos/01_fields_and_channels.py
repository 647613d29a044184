"""
Fields, flux and the channels that bind
=======================================

A constant field on the unit disc, a constant well on the same disc, and the
angular-momentum channels that carry a weakly coupled eigenvalue.
"""
import numpy as np

from pauli_weakbind import Channel, channel_potential, uniform_setup, virtual_channels, zero_mode
from pauli_weakbind.fields import azimuthal_potential, xi

# B = 3 on [0, 1] gives flux 1.5: one zero mode and one virtual level
s = uniform_setup(3.0)
print(f"flux {s.flux:g}, N = {s.N}, N' = {s.Nprime}, R = {s.R:g}")

r = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
print("r      b(r)      xi(r)")
for ri, bi, xii in zip(r, azimuthal_potential(s.B, r), xi(s.B, r)):
    print(f"{ri:<6g} {bi:<9.5f} {xii:.5f}")

# outside the support both reduce to the pure-flux forms
print("b(4) * 4 =", azimuthal_potential(s.B, 4.0) * 4.0, " -xi(4)/ln 4 =", -xi(s.B, 4.0) / np.log(4.0))

for ch, regime, mu in virtual_channels(s):
    w = zero_mode(s, ch)
    print(f"{ch}: {regime:<8} mu = {mu:g}  class {w.decay_class:<15} v = {w.v_coeff:.6f}"
          f"  norm^2 = {w.norm_sq:.6f}")

# the channel potential is exactly mu^2/r^2 beyond the support
pot = channel_potential(s, Channel(-1, -1))
print("W(3) * 9 =", float(pot.W(3.0)) * 9.0)

# reversing the field maps (m, s) to (-m, -s)
print("reflected:", [str(ch) for ch, _, _ in virtual_channels(s.reflected())])
