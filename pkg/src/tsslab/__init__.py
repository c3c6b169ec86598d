"""Two-state quantum systems: closed-form dynamics, driven quasi-energies,
three-level probe spectroscopy and a brute-force integrator to check them."""

from .driven import (DriveSystem, MollowTriplet, QuasiEnergyQuartet, mollow_positions,
                     px_probabilities, quasi_energies, quasi_energy_spectrum, rotate_rwa,
                     solve_driven)
from .errors import ConvergenceError, FitError, ValidationError
from .linalg import EigenSystem, eig2_hermitian, eig3_hermitian, propagator
from .oracle import HarmonicHamiltonian, IntegratorSpec, arbitrate_ammonia_factor, integrate_tdse
from .static import (ABCDCoefficients, StaticSystem, abcd_coefficients, average_energy,
                     definite_energies, modulation_depth, probabilities, solve_abcd, solve_matrix,
                     to_eigenbasis)
from .trace import AmplitudeTrace

__version__ = "0.1.0"
