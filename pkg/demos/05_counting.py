"""
How many eigenvalues
====================

At small coupling the full operator has exactly N' negative eigenvalues: one per
virtual channel, none elsewhere.
"""
from pauli_weakbind import uniform_setup
from pauli_weakbind.harness import conjugation_check, count_check, negative_spectrum

for B0 in (0.0, 2.0, 3.0, 5.0):
    s = uniform_setup(B0)
    total, expected = count_check(s, 0.01)
    spec = negative_spectrum(s, 0.01, m_max=6)
    listing = ", ".join(f"{lam:.4e} in {ch}" for lam, ch in spec)
    print(f"flux {s.flux:<4g} count {total} (N' = {expected}): {listing}")

# stronger coupling fills more channels
s = uniform_setup(2.0)
for alpha in (1.0, 5.0, 20.0):
    spec = negative_spectrum(s, alpha, m_max=8)
    print(f"flux 1, alpha = {alpha:<4g}: {len(spec)} eigenvalues, lowest {spec[0][0]:.5f} in {spec[0][1]}")

# field reversal is an anti-unitary symmetry: the spectrum is unchanged
print("spectrum symmetric under B -> -B:", conjugation_check(uniform_setup(5.0), 0.05, m_max=6))
