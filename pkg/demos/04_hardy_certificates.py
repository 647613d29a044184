"""
Certifying the silent channels
==============================

Every channel whose zero-energy solution grows gets a Muckenhoupt constant M;
below alpha = 1/(4M) it has no negative eigenvalue.
"""
from pauli_weakbind import Channel, HalfLineProblem, certify_setup, channel_potential, uniform_setup
from pauli_weakbind.halfline import count_negative

for B0 in (0.0, 2.0, 3.0, 5.0):
    s = uniform_setup(B0)
    cert = certify_setup(s)
    worst = min(cert.per_channel, key=lambda c: c.alpha_threshold)
    print(f"flux {s.flux:<4g} alpha_c = {cert.alpha_c:.6f}  (set by {worst.channel}, "
          f"sup at r = {worst.argmax:.4f}); decay in |m| ok: {cert.decay_ok}")

# the bound is not sharp, but it is safe: no channel binds at its own threshold
s = uniform_setup(2.0)
cert = certify_setup(s, m_max=6)
for c in sorted(cert.per_channel, key=lambda c: c.alpha_threshold)[:5]:
    pr = HalfLineProblem(channel_potential(s, c.channel), c.alpha_threshold)
    print(f"  {c.channel!s:>7}  threshold {c.alpha_threshold:.5f}  count {count_negative(pr)}")

# for growing channels far from the window, the constant decays like 1/m^2
full = certify_setup(s, m_max=16)
for m in (4, 8, 16):
    print(f"  m = {m:>2}: sup = {full.certificate(Channel(m, 1)).muck_sup:.3e}")
