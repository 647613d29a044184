"""Weak-coupling eigenvalues of two-dimensional Pauli operators with radial fields.

The radial problem splits into angular-momentum channels; each channel is a
half-line operator whose zero-energy behaviour fixes how its lowest eigenvalue
leaves the origin as the coupling of an attractive potential goes to zero.
"""
from .asymptotics import (AsymptoticPrediction, DomainError, invert_tlogt, optimal_kappa,
                          predict_halfline, predict_pauli)
from .channels import (Channel, ChannelPotential, ZeroMode, channel_potential, classify,
                       virtual_channels, zero_mode)
from .fields import (FieldSetup, ProfileError, RadialProfile, azimuthal_potential, flux,
                     setup, uniform_setup, xi)
from .halfline import (EigenResult, GeometricMesh, HalfLineProblem, NoRootError,
                       StiffnessError, TruncationError, count_negative, count_nodes,
                       fem_lowest, fem_spectrum, local_energy_check, shoot_eigenvalue,
                       trial_quotient)
from .hardy import (DecayCheckError, GrowthClassError, HardyCertificate, certify_setup,
                    muckenhoupt_constant)
from .harness import (SweepReport, SweepRow, concavity_check, conjugation_check, count_check,
                      fit_remainder, sweep)
from .specfun import BesselOverflowError, bessel_k, c_mu, gamma

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
