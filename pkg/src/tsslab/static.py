"""Closed-form dynamics of a two-state system with a constant Hamiltonian.

Parameters follow the (w0, w11, |wD|, phiD) convention: H[0,0] = w0 - w11,
H[1,1] = w0 + w11 and H[1,0] = |wD| exp(+j phiD).  Two solution routes are
provided, the propagator form and the four-constant (A, B, C, D) form, and
they agree to rounding.  States are plain complex numpy arrays of length 2.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError
from .linalg import EigenSystem, _fix_columns, eig2_hermitian, mixing_angle, mixing_sin_cos, propagator

NORM_TOL = 1e-12
ROUTES = ("weighted", "bracket", "density_canonical", "density_eigen")


def as_state(c, dim=2, tol=NORM_TOL):
    c = np.asarray(c, dtype=complex).reshape(-1)
    if c.shape != (dim,):
        raise ValidationError(f"expected a {dim}-component state, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValidationError("state has non-finite components")
    norm = float(np.vdot(c, c).real)
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"state is not normalized (|c|^2 = {norm!r})")
    return c


@dataclass(frozen=True)
class StaticSystem:
    omega0: float
    omega11: float
    omegaD_mag: float
    phiD: float = 0.0

    def __post_init__(self):
        vals = (self.omega0, self.omega11, self.omegaD_mag, self.phiD)
        if not all(np.isfinite(v) for v in vals):
            raise ValidationError("system parameters must be finite")
        if self.omegaD_mag < 0:
            raise ValidationError("omegaD_mag must be non-negative")

    @classmethod
    def from_hamiltonian(cls, H):
        H = np.asarray(H, dtype=complex)
        eig2_hermitian(H)  # validates
        off = H[1, 0]
        return cls(
            omega0=0.5 * (H[0, 0].real + H[1, 1].real),
            omega11=0.5 * (H[1, 1].real - H[0, 0].real),
            omegaD_mag=float(abs(off)),
            phiD=float(np.angle(off)) if off != 0 else 0.0,
        )

    @cached_property
    def _angles(self):
        return mixing_angle(self.omega11, self.omegaD_mag)

    @property
    def OmegaP(self):
        return self._angles[0]

    @property
    def OmegaN(self):
        return -self._angles[0]

    @property
    def OmegaGR(self):
        return 2.0 * self._angles[0]

    @property
    def thetaR(self):
        return self._angles[1]

    @cached_property
    def sin_cos(self):
        return mixing_sin_cos(self.omega11, self.omegaD_mag)

    @cached_property
    def phase(self):
        """exp(+j phiD), exact for phiD in {0, pi}."""
        if self.phiD == 0.0:
            return 1.0 + 0j
        if self.phiD == np.pi:
            return -1.0 + 0j
        return np.exp(1j * self.phiD)

    @cached_property
    def hamiltonian(self):
        off = self.omegaD_mag * self.phase
        return np.array(
            [[self.omega0 - self.omega11, np.conj(off)],
             [off, self.omega0 + self.omega11]],
            dtype=complex,
        )

    @cached_property
    def eigensystem(self) -> EigenSystem:
        s, c = self.sin_cos
        ph = self.phase
        xi = np.array([[s, c], [c * ph, -s * ph]], dtype=complex)
        vals = np.array([self.omega0 + self.OmegaP, self.omega0 - self.OmegaP])
        return EigenSystem(vals, _fix_columns(xi))

    @property
    def xi_P(self):
        return self.eigensystem.vectors[:, 0]

    @property
    def xi_N(self):
        return self.eigensystem.vectors[:, 1]


@dataclass(frozen=True)
class ABCDCoefficients:
    A: complex
    B: complex
    C: complex
    D: complex

    def as_tuple(self):
        return (self.A, self.B, self.C, self.D)

    def is_real(self, tol=1e-13):
        return all(abs(complex(x).imag) <= tol for x in self.as_tuple())


def solve_matrix(sys: StaticSystem, c0, t):
    """C(t) for scalar or array ``t``; returns shape (2,) or (len(t), 2)."""
    c0 = as_state(c0)
    es = sys.eigensystem
    d0 = es.vectors.conj().T @ c0
    t_arr = np.asarray(t, dtype=float)
    rel = np.array([sys.OmegaP, -sys.OmegaP])
    phases = np.exp(-1j * np.multiply.outer(t_arr, rel)) * np.exp(-1j * sys.omega0 * t_arr)[..., None]
    return (phases * d0) @ es.vectors.T


def abcd_coefficients(sys: StaticSystem, c0) -> ABCDCoefficients:
    c1, c2 = as_state(c0)
    s, c = sys.sin_cos
    em, ep = np.conj(sys.phase), sys.phase
    return ABCDCoefficients(
        A=c * c * c1 - c * s * em * c2,
        B=s * s * c1 + c * s * em * c2,
        C=-c * s * ep * c1 + s * s * c2,
        D=c * s * ep * c1 + c * c * c2,
    )


def solve_abcd(sys: StaticSystem, coeffs: ABCDCoefficients, t):
    t = np.asarray(t, dtype=float)
    up = np.exp(1j * sys.OmegaP * t)
    dn = np.exp(-1j * sys.OmegaP * t)
    g = np.exp(-1j * sys.omega0 * t)
    c1 = (coeffs.A * up + coeffs.B * dn) * g
    c2 = (coeffs.C * up + coeffs.D * dn) * g
    return np.stack([c1, c2], axis=-1)


def probabilities(coeffs: ABCDCoefficients, OmegaP, t):
    """Occupation probabilities from the four constants (general complex form)."""
    t = np.asarray(t, dtype=float)
    rot = np.exp(2j * OmegaP * t)
    A, B, C, D = coeffs.as_tuple()
    p1 = abs(A) ** 2 + abs(B) ** 2 + 2.0 * np.real(A * np.conj(B) * rot)
    p2 = abs(C) ** 2 + abs(D) ** 2 + 2.0 * np.real(C * np.conj(D) * rot)
    return p1, p2


def probabilities_real(coeffs: ABCDCoefficients, OmegaP, t):
    """Cosine form, valid only for real coefficients."""
    if not coeffs.is_real():
        raise ValidationError("cosine form requires real A, B, C, D")
    A, B, C, D = (complex(x).real for x in coeffs.as_tuple())
    cos = np.cos(2.0 * OmegaP * np.asarray(t, dtype=float))
    return A * A + B * B + 2 * A * B * cos, C * C + D * D + 2 * C * D * cos


def definite_energies(sys: StaticSystem):
    return sys.omega0 + sys.OmegaP, sys.omega0 - sys.OmegaP


def to_eigenbasis(sys: StaticSystem, c):
    c = np.asarray(c, dtype=complex)
    return c @ sys.eigensystem.vectors.conj()


def from_eigenbasis(sys: StaticSystem, d):
    d = np.asarray(d, dtype=complex)
    return d @ sys.eigensystem.vectors.T


def is_stationary(coeffs: ABCDCoefficients, tol=1e-13):
    """'P' if A = C = 0, 'N' if B = D = 0, else None."""
    A, B, C, D = (abs(x) for x in coeffs.as_tuple())
    if A <= tol and C <= tol:
        return "P"
    if B <= tol and D <= tol:
        return "N"
    return None


def density_matrix(c):
    c = as_state(c, dim=len(np.asarray(c).reshape(-1)))
    return np.outer(c, c.conj())


def average_energy(sys: StaticSystem, c0, route="bracket"):
    if route not in ROUTES:
        raise ValidationError(f"unknown route {route!r}; choose from {', '.join(ROUTES)}")
    c0 = as_state(c0)
    H = sys.hamiltonian
    if route == "weighted":
        dP, dN = to_eigenbasis(sys, c0)
        EP, EN = definite_energies(sys)
        return float(abs(dP) ** 2 * EP + abs(dN) ** 2 * EN)
    if route == "bracket":
        return float(np.vdot(c0, H @ c0).real)
    if route == "density_canonical":
        c1, c2 = c0
        cross = c1 * np.conj(c2) * sys.omegaD_mag * sys.phase
        return float(abs(c1) ** 2 * (sys.omega0 - sys.omega11)
                     + abs(c2) ** 2 * (sys.omega0 + sys.omega11)
                     + 2.0 * cross.real)
    rho_xi = density_matrix(to_eigenbasis(sys, c0))
    return float(np.trace(rho_xi @ np.diag(sys.eigensystem.values)).real)


def modulation_depth(sys: StaticSystem):
    denom = sys.omega11 ** 2 + sys.omegaD_mag ** 2
    if denom == 0.0:
        return 0.0
    return sys.omegaD_mag ** 2 / denom


def classify_eigenvector(v, tol=1e-12):
    """'Symm', 'Asym' or 'complex' for a 2-component eigenvector."""
    v = np.asarray(v, dtype=complex)
    if np.any(np.abs(v.imag) > tol):
        return "complex"
    re = v.real
    if np.all(re >= -tol):
        return "Symm"
    if re[0] * re[1] < 0:
        return "Asym"
    return "complex"


def uniform_grid(t_start, t_end, n):
    if n < 2:
        raise ValidationError("time grid needs at least 2 points")
    if not (np.isfinite(t_start) and np.isfinite(t_end)) or t_end <= t_start:
        raise ValidationError("time grid needs finite t_start < t_end")
    return np.linspace(float(t_start), float(t_end), int(n))


__all__ = [
    "ABCDCoefficients", "ROUTES", "StaticSystem", "abcd_coefficients", "as_state",
    "average_energy", "classify_eigenvector", "definite_energies", "density_matrix",
    "from_eigenbasis", "is_stationary", "modulation_depth", "probabilities",
    "probabilities_real", "propagator", "solve_abcd", "solve_matrix", "to_eigenbasis",
    "uniform_grid",
]
