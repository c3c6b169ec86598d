"""Hermitian eigen-solvers and propagators for 2x2 and 3x3 Hamiltonians.

The 2x2 solver is closed form and follows the mixing-angle parameterization
used throughout the package: for

    H = w0*I + [[-w11, |wD| e^{-j phi}], [|wD| e^{+j phi}, +w11]]

the eigenvalues are ``w0 +/- sqrt(w11**2 + |wD|**2)`` and the eigenvectors are

    xi_P = (sin t, cos t e^{j phi}),   xi_N = (cos t, -sin t e^{j phi})

with ``t = arccos(w11 / OmegaP) / 2`` in ``[0, pi/2]``.  The 3x3 solver is a
cyclic complex Jacobi iteration.  Eigenvalues are always sorted descending,
so column 0 is the "P" state and the last column the lowest level.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ValidationError

HERMITIAN_RTOL = 1e-14


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray   # real, descending
    vectors: np.ndarray  # unitary, columns paired with values

    @property
    def dim(self):
        return len(self.values)


def as_hermitian(H, dim=None):
    """Validate and return ``H`` as a complex Hermitian ndarray."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {H.shape}")
    if dim is not None and H.shape[0] != dim:
        raise ValidationError(f"expected a {dim}x{dim} matrix, got {H.shape}")
    if not np.all(np.isfinite(H)):
        raise ValidationError("matrix has non-finite entries")
    scale = max(np.max(np.abs(H)), np.finfo(float).tiny)
    if np.max(np.abs(H - H.conj().T)) > HERMITIAN_RTOL * scale:
        raise ValidationError("matrix is not Hermitian")
    H = 0.5 * (H + H.conj().T)
    return H


def fix_phase(v, tol=0.0):
    """Rotate the global phase so the first nonzero component is real >= 0."""
    v = np.array(v, dtype=complex)
    for comp in v:
        if abs(comp) > tol:
            return v * (abs(comp) / comp)
    return v


def _fix_columns(U):
    scale = np.max(np.abs(U))
    return np.column_stack([fix_phase(U[:, k], 1e-15 * scale) for k in range(U.shape[1])])


def mixing_angle(omega11, omegaD_mag):
    """Return (OmegaP, thetaR) for the canonical 2x2 parameterization."""
    OmegaP = float(np.hypot(omega11, omegaD_mag))
    if OmegaP == 0.0:
        return 0.0, 0.0
    ratio = min(1.0, max(-1.0, omega11 / OmegaP))
    return OmegaP, 0.5 * float(np.arccos(ratio))


def mixing_sin_cos(omega11, omegaD_mag):
    """(sin thetaR, cos thetaR) via half-angle roots, exact at both limits."""
    m = max(abs(omega11), abs(omegaD_mag))
    if m == 0.0:
        return 0.0, 1.0
    omega11, omegaD_mag = omega11 / m, omegaD_mag / m
    OmegaP = float(np.hypot(omega11, omegaD_mag))
    r = min(1.0, max(-1.0, omega11 / OmegaP))
    # take the well-conditioned root, get the other from sin(2 theta) = |wD|/OmegaP
    if r >= 0:
        c = float(np.sqrt(0.5 * (1.0 + r)))
        return omegaD_mag / (2.0 * OmegaP * c), c
    s = float(np.sqrt(0.5 * (1.0 - r)))
    return s, omegaD_mag / (2.0 * OmegaP * s)


def eig2_hermitian(H):
    H = as_hermitian(H, 2)
    w0 = 0.5 * (H[0, 0].real + H[1, 1].real)
    w11 = 0.5 * (H[1, 1].real - H[0, 0].real)
    off = H[1, 0]
    ph = off / abs(off) if off != 0 else 1.0 + 0j
    OmegaP, _ = mixing_angle(w11, abs(off))
    s, c = mixing_sin_cos(w11, abs(off))
    U = np.array([[s, c], [c * ph, -s * ph]], dtype=complex)
    return EigenSystem(np.array([w0 + OmegaP, w0 - OmegaP]), _fix_columns(U))


def _jacobi_pair(a, b, d):
    """Unitary 2x2 that diagonalizes [[a, b], [conj(b), d]] (a, d real)."""
    mag = abs(b)
    if mag == 0.0:
        return np.eye(2, dtype=complex)
    ph = b / mag
    # strip the phase, then rotate the real symmetric block
    theta = 0.5 * np.arctan2(2.0 * mag, a - d)
    c, s = np.cos(theta), np.sin(theta)
    q = np.conj(ph)
    return np.array([[c, -s], [s * q, c * q]], dtype=complex)


def eig3_hermitian(H, tol=1e-13, max_sweeps=100):
    """Cyclic Jacobi eigen-decomposition of a small Hermitian matrix."""
    A = as_hermitian(H)
    if A.shape[0] not in (2, 3):
        raise ValidationError("eig3_hermitian handles 2x2 and 3x3 input only")
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    # unitary rotations preserve the Frobenius norm, so this floor is fixed
    floor = tol * np.linalg.norm(A)
    for _ in range(max_sweeps + 1):
        off = np.abs(A - np.diag(np.diag(A)))
        if np.max(off) <= floor:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) <= floor:
                    A[p, q] = A[q, p] = 0.0
                    continue
                J = _jacobi_pair(A[p, p].real, A[p, q], A[q, q].real)
                G = np.eye(n, dtype=complex)
                G[np.ix_([p, q], [p, q])] = J
                A = G.conj().T @ A @ G
                A = 0.5 * (A + A.conj().T)
                V = V @ G
    else:
        raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    vals = np.diag(A).real
    order = np.argsort(-vals, kind="stable")
    return EigenSystem(vals[order], _fix_columns(V[:, order]))


def eigh(H):
    """Dispatch to the closed-form solver for 2x2, Jacobi otherwise."""
    H = np.asarray(H)
    return eig2_hermitian(H) if H.shape == (2, 2) else eig3_hermitian(H)


def propagator(H, t, eig=None):
    """U(t) = V diag(exp(-j lambda t)) V^dagger."""
    t = float(t)
    if not np.isfinite(t):
        raise ValidationError("time must be finite")
    es = eig if eig is not None else eigh(H)
    V = es.vectors
    return (V * np.exp(-1j * es.values * t)) @ V.conj().T
