"""Harmonically driven two-state systems under the rotating-wave approximation.

The lab-frame Hamiltonian is

    H(t) = w0*I + [[-wA/2, OmegaD cos(wC t)], [conj(OmegaD) cos(wC t), +wA/2]]

Rotating by R(t) = diag(exp(+j wC t/2), exp(-j wC t/2)) and dropping the
counter-rotating terms leaves a constant Hamiltonian with w11 = deltaC/2,
|wD| = |OmegaD|/2 and phiD = -arg(OmegaD), where deltaC = wA - wC.  That
static problem is solved in closed form and rotated back to the lab frame,
which splits each of the two rotating-frame levels into a pair of
quasi-energies separated by the drive frequency.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError
from .static import StaticSystem, abcd_coefficients, as_state, solve_matrix
from .trace import AmplitudeTrace


@dataclass(frozen=True)
class DriveSystem:
    omega0: float
    omegaA: float
    OmegaD: complex
    omegaC: float

    def __post_init__(self):
        if not all(np.isfinite(complex(v)) for v in (self.omega0, self.omegaA, self.OmegaD, self.omegaC)):
            raise ValidationError("drive parameters must be finite")

    @classmethod
    def from_detuning(cls, omega0, omegaA, OmegaD, deltaC):
        return cls(omega0, omegaA, OmegaD, omegaA - deltaC)

    @property
    def deltaC(self):
        return self.omegaA - self.omegaC

    @property
    def OmegaPt(self):
        return float(np.hypot(self.deltaC / 2.0, abs(self.OmegaD) / 2.0))

    @property
    def OmegaGRt(self):
        return 2.0 * self.OmegaPt

    @cached_property
    def rotated_static(self) -> StaticSystem:
        return rotate_rwa(self)

    def hamiltonian(self, t):
        """Lab-frame Hamiltonian, no approximation."""
        k = np.cos(self.omegaC * t)
        return np.array(
            [[self.omega0 - self.omegaA / 2, self.OmegaD * k],
             [np.conj(self.OmegaD) * k, self.omega0 + self.omegaA / 2]],
            dtype=complex,
        )


@dataclass(frozen=True)
class QuasiEnergyQuartet:
    eP_L: float
    eP_H: float
    eN_L: float
    eN_H: float

    def as_array(self):
        return np.array([self.eP_L, self.eP_H, self.eN_L, self.eN_H])


@dataclass(frozen=True)
class MollowTriplet:
    center: float
    red: float
    blue: float


def rotate_rwa(sys: DriveSystem) -> StaticSystem:
    OmegaD = complex(sys.OmegaD)
    phi = -float(np.angle(OmegaD)) if OmegaD != 0 else 0.0
    return StaticSystem(sys.omega0, sys.deltaC / 2.0, abs(OmegaD) / 2.0, phi)


def back_rotation(omegaC, t):
    """Diagonal of R(t) as an array of shape (..., 2)."""
    t = np.asarray(t, dtype=float)
    return np.stack([np.exp(0.5j * omegaC * t), np.exp(-0.5j * omegaC * t)], axis=-1)


def solve_rotating(sys: DriveSystem, c0, t):
    """Rotating-frame amplitudes C_x(t); C_x(0) = C(0)."""
    return solve_matrix(sys.rotated_static, c0, t)


def solve_driven(sys: DriveSystem, c0, t):
    return back_rotation(sys.omegaC, t) * solve_rotating(sys, c0, t)


def solve_driven_abcd(sys: DriveSystem, c0, t):
    """Four-term lab-frame amplitudes written with the quartet frequencies."""
    co = abcd_coefficients(sys.rotated_static, c0)
    t = np.asarray(t, dtype=float)
    W = sys.OmegaPt
    lo = np.exp(-1j * (sys.omega0 - sys.omegaC / 2) * t)
    hi = np.exp(-1j * (sys.omega0 + sys.omegaC / 2) * t)
    c1 = (co.A * np.exp(1j * W * t) + co.B * np.exp(-1j * W * t)) * lo
    c2 = (co.C * np.exp(1j * W * t) + co.D * np.exp(-1j * W * t)) * hi
    return np.stack([c1, c2], axis=-1)


def solve_driven_recast(sys: DriveSystem, c0, t):
    """Same amplitudes referenced to the bare levels w0 -/+ wA/2."""
    co = abcd_coefficients(sys.rotated_static, c0)
    t = np.asarray(t, dtype=float)
    W, d = sys.OmegaPt, sys.deltaC
    c1 = (co.A * np.exp(1j * (-d / 2 + W) * t) + co.B * np.exp(1j * (-d / 2 - W) * t)) \
        * np.exp(-1j * (sys.omega0 - sys.omegaA / 2) * t)
    c2 = (co.C * np.exp(1j * (d / 2 + W) * t) + co.D * np.exp(1j * (d / 2 - W) * t)) \
        * np.exp(-1j * (sys.omega0 + sys.omegaA / 2) * t)
    return np.stack([c1, c2], axis=-1)


def quasi_energies(sys: DriveSystem) -> QuasiEnergyQuartet:
    W = sys.OmegaPt
    lo = sys.omega0 - sys.omegaC / 2
    hi = sys.omega0 + sys.omegaC / 2
    return QuasiEnergyQuartet(eP_L=lo + W, eP_H=hi + W, eN_L=lo - W, eN_H=hi - W)


def dressed_level_pairs(sys: DriveSystem):
    """Each bare level shifted by -/+ deltaC/2 and split by +/- OmegaPt.

    Returns {"a": (upper, lower), "b": (upper, lower)} for the upper bare
    level a = w0 + wA/2 and the lower bare level b = w0 - wA/2.
    """
    W, d = sys.OmegaPt, sys.deltaC
    wa = sys.omega0 + sys.omegaA / 2
    wb = sys.omega0 - sys.omegaA / 2
    return {"a": (wa - d / 2 + W, wa - d / 2 - W), "b": (wb + d / 2 + W, wb + d / 2 - W)}


def mollow_positions(sys: DriveSystem) -> MollowTriplet:
    return MollowTriplet(center=sys.omegaC, red=sys.omegaC - sys.OmegaGRt, blue=sys.omegaC + sys.OmegaGRt)


def px_probabilities_direct(sys: DriveSystem, c0, t):
    c = solve_driven(sys, c0, t)
    plus = 0.5 * np.abs(c[..., 0] + c[..., 1]) ** 2
    minus = 0.5 * np.abs(c[..., 0] - c[..., 1]) ** 2
    return plus, minus


def px_four_cosine(sys: DriveSystem, c0, t):
    """Four-cosine form of P(+x), P(-x); needs real A, B, C, D."""
    co = abcd_coefficients(sys.rotated_static, c0)
    if not co.is_real():
        raise ValidationError("the four-cosine form requires real A, B, C, D")
    A, B, C, D = (complex(x).real for x in co.as_tuple())
    t = np.asarray(t, dtype=float)
    g, w = sys.OmegaGRt, sys.omegaC
    common = 0.5 + (A * B + C * D) * np.cos(g * t)
    swing = (A * C + B * D) * np.cos(w * t) + B * C * np.cos((g - w) * t) + A * D * np.cos((g + w) * t)
    return common + swing, common - swing


def px_probabilities(sys: DriveSystem, c0, t):
    """P(+x), P(-x).  Uses the cosine form when it applies."""
    co = abcd_coefficients(sys.rotated_static, c0)
    if co.is_real():
        return px_four_cosine(sys, c0, t)
    return px_probabilities_direct(sys, c0, t)


def driven_trace(sys: DriveSystem, c0, t_start, t_end, n):
    t = np.linspace(t_start, t_end, int(n))
    return AmplitudeTrace(t, solve_driven(sys, as_state(c0), t))


@dataclass(frozen=True)
class SpectralPeak:
    component: int
    frequency: float
    magnitude: float


@dataclass(frozen=True)
class Spectrum:
    frequencies: np.ndarray  # ascending, rad/s
    magnitudes: np.ndarray   # shape (nfreq, dim)
    peaks: list
    bin_width: float


def find_peaks(mag, rel_threshold=0.1):
    """Indices of circular local maxima strictly above both neighbours."""
    left = np.roll(mag, 1)
    right = np.roll(mag, -1)
    keep = (mag > left) & (mag > right) & (mag > rel_threshold * np.max(mag))
    return np.flatnonzero(keep)


def quasi_energy_spectrum(trace: AmplitudeTrace, rel_threshold=0.1) -> Spectrum:
    """Rectangular-window DFT of each amplitude, reported at +w for exp(-j w t)."""
    dt = trace.uniform_step()
    n = len(trace.t)
    X = np.fft.fft(trace.amplitudes, axis=0) / n
    freqs = -2.0 * np.pi * np.fft.fftfreq(n, dt)
    order = np.argsort(freqs, kind="stable")
    freqs, mags = freqs[order], np.abs(X[order])
    peaks = []
    for k in range(mags.shape[1]):
        for i in find_peaks(mags[:, k], rel_threshold):
            peaks.append(SpectralPeak(k, float(freqs[i]), float(mags[i, k])))
    return Spectrum(freqs, mags, peaks, 2.0 * np.pi / (n * dt))
