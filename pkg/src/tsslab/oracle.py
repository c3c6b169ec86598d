"""Brute-force integration of i dC/dt = H(t) C with fixed-step RK4.

No rotating frame and no RWA: this is the reference the closed forms are
checked against.  The state is never renormalized, so the norm drift is the
error signal.  Hamiltonians of the form H0 + sum_k V_k cos(w_k t) run through
a compiled kernel; any other callable goes through a plain Python loop.
"""

from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import ConvergenceError, ValidationError
from .static import as_state
from .trace import AmplitudeTrace

DRIFT_ABORT = 1e-6


@dataclass(frozen=True)
class HarmonicHamiltonian:
    H0: np.ndarray
    drives: tuple = field(default_factory=tuple)  # ((V, omega), ...)

    def __post_init__(self):
        object.__setattr__(self, "H0", np.asarray(self.H0, dtype=complex))
        object.__setattr__(self, "drives", tuple((np.asarray(V, dtype=complex), float(w)) for V, w in self.drives))

    def __call__(self, t):
        H = self.H0.copy()
        for V, w in self.drives:
            H = H + V * np.cos(w * t)
        return H

    @property
    def dim(self):
        return self.H0.shape[0]

    @property
    def omega_max(self):
        bound = np.abs(self.H0).sum(axis=1)
        for V, _ in self.drives:
            bound = bound + np.abs(V).sum(axis=1)
        freqs = [w for _, w in self.drives]
        return float(max([np.max(bound)] + [abs(w) for w in freqs]))


@dataclass(frozen=True)
class IntegratorSpec:
    dt: float
    t_end: float
    record_stride: int = 1
    method: str = "rk4_fixed"

    def __post_init__(self):
        if self.method != "rk4_fixed":
            raise ValidationError(f"unsupported method {self.method!r}")
        if not (self.dt > 0 and self.t_end > 0 and np.isfinite(self.dt) and np.isfinite(self.t_end)):
            raise ValidationError("dt and t_end must be positive and finite")
        if self.record_stride < 1:
            raise ValidationError("record_stride must be >= 1")

    @property
    def n_steps(self):
        return int(np.ceil(self.t_end / self.dt - 1e-9))

    @property
    def step(self):
        return self.t_end / self.n_steps

    def check_resolution(self, omega_max):
        limit = 2 * np.pi / (50 * omega_max) if omega_max > 0 else np.inf
        if self.step > limit * (1 + 1e-12):
            raise ValidationError(f"dt={self.step:.3e} exceeds carrier limit 2pi/(50 w_max)={limit:.3e}")


def choose_dt(omega_max, t_end, tol=1e-10, omega_err=None):
    """Largest step meeting the carrier rule and an RK4 error budget ``tol``.

    ``omega_err`` is the frequency scale driving truncation error (defaults
    to ``omega_max``); per-step phase error ~ (w dt)^5/120.
    """
    w = omega_err if omega_err is not None else omega_max
    dt = 2 * np.pi / (50 * omega_max)
    if w > 0:
        dt = min(dt, (120.0 * tol / (w ** 5 * t_end)) ** 0.25)
    return dt


@numba.njit(cache=True)
def _rk4_harmonic(H0, Vs, ws, c0, dt, n_steps, stride):
    dim = c0.shape[0]
    nd = ws.shape[0]
    n_rec = n_steps // stride + 1
    out = np.empty((n_rec, dim), dtype=np.complex128)
    c = c0.copy()
    out[0] = c
    k1 = np.empty(dim, dtype=np.complex128)
    k2 = np.empty(dim, dtype=np.complex128)
    k3 = np.empty(dim, dtype=np.complex128)
    k4 = np.empty(dim, dtype=np.complex128)
    tmp = np.empty(dim, dtype=np.complex128)
    Ha = np.empty((dim, dim), dtype=np.complex128)
    Hb = np.empty((dim, dim), dtype=np.complex128)
    Hc = np.empty((dim, dim), dtype=np.complex128)
    max_drift = 0.0
    rec = 1
    for n in range(n_steps):
        t = n * dt
        for i in range(dim):
            for j in range(dim):
                Ha[i, j] = H0[i, j]
                Hb[i, j] = H0[i, j]
                Hc[i, j] = H0[i, j]
        for k in range(nd):
            ca = np.cos(ws[k] * t)
            cb = np.cos(ws[k] * (t + 0.5 * dt))
            cc = np.cos(ws[k] * (t + dt))
            for i in range(dim):
                for j in range(dim):
                    Ha[i, j] += Vs[k, i, j] * ca
                    Hb[i, j] += Vs[k, i, j] * cb
                    Hc[i, j] += Vs[k, i, j] * cc
        for i in range(dim):
            s = 0j
            for j in range(dim):
                s += Ha[i, j] * c[j]
            k1[i] = -1j * s
        for i in range(dim):
            tmp[i] = c[i] + 0.5 * dt * k1[i]
        for i in range(dim):
            s = 0j
            for j in range(dim):
                s += Hb[i, j] * tmp[j]
            k2[i] = -1j * s
        for i in range(dim):
            tmp[i] = c[i] + 0.5 * dt * k2[i]
        for i in range(dim):
            s = 0j
            for j in range(dim):
                s += Hb[i, j] * tmp[j]
            k3[i] = -1j * s
        for i in range(dim):
            tmp[i] = c[i] + dt * k3[i]
        for i in range(dim):
            s = 0j
            for j in range(dim):
                s += Hc[i, j] * tmp[j]
            k4[i] = -1j * s
        norm = 0.0
        for i in range(dim):
            c[i] = c[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            norm += c[i].real * c[i].real + c[i].imag * c[i].imag
        drift = abs(norm - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > 1e-6:
            return out[:rec], max_drift, n + 1
        if (n + 1) % stride == 0:
            out[rec] = c
            rec += 1
    return out[:rec], max_drift, n_steps


def _rk4_python(H_of_t, c0, dt, n_steps, stride):
    c = c0.copy()
    out = [c.copy()]
    max_drift = 0.0
    for n in range(n_steps):
        t = n * dt
        Ha, Hb, Hc = H_of_t(t), H_of_t(t + 0.5 * dt), H_of_t(t + dt)
        k1 = -1j * (Ha @ c)
        k2 = -1j * (Hb @ (c + 0.5 * dt * k1))
        k3 = -1j * (Hb @ (c + 0.5 * dt * k2))
        k4 = -1j * (Hc @ (c + dt * k3))
        c = c + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = abs(float(np.vdot(c, c).real) - 1.0)
        max_drift = max(max_drift, drift)
        if drift > DRIFT_ABORT:
            return np.array(out), max_drift, n + 1
        if (n + 1) % stride == 0:
            out.append(c.copy())
    return np.array(out), max_drift, n_steps


@dataclass(frozen=True)
class OracleResult:
    trace: AmplitudeTrace
    max_norm_drift: float
    dt: float


def _estimate_omega_max(H_of_t, t_end, samples=64):
    ts = np.linspace(0.0, t_end, samples)
    return float(max(np.max(np.abs(H_of_t(t)).sum(axis=1)) for t in ts))


def integrate_tdse(H_of_t, c0, spec: IntegratorSpec, omega_max=None) -> OracleResult:
    """Integrate from t = 0 to spec.t_end; records every ``record_stride`` steps."""
    c0 = np.asarray(c0, dtype=complex)
    c0 = as_state(c0, dim=c0.shape[0])
    if omega_max is None:
        omega_max = H_of_t.omega_max if isinstance(H_of_t, HarmonicHamiltonian) \
            else _estimate_omega_max(H_of_t, spec.t_end)
    spec.check_resolution(omega_max)
    dt, n_steps = spec.step, spec.n_steps
    if isinstance(H_of_t, HarmonicHamiltonian):
        dim = H_of_t.dim
        if dim != c0.shape[0]:
            raise ValidationError("state and Hamiltonian dimensions differ")
        if H_of_t.drives:
            Vs = np.stack([V for V, _ in H_of_t.drives])
            ws = np.array([w for _, w in H_of_t.drives])
        else:
            Vs = np.zeros((0, dim, dim), dtype=complex)
            ws = np.zeros(0)
        amps, drift, done = _rk4_harmonic(H_of_t.H0, Vs, ws, c0, dt, n_steps, spec.record_stride)
    else:
        amps, drift, done = _rk4_python(H_of_t, c0, dt, n_steps, spec.record_stride)
    if drift > DRIFT_ABORT:
        raise ConvergenceError(
            f"norm drift {drift:.2e} exceeded {DRIFT_ABORT:.0e} at t={done * dt:.6g} "
            f"(dt={dt:.3e}); use a smaller step"
        )
    t = np.arange(amps.shape[0]) * spec.record_stride * dt
    return OracleResult(AmplitudeTrace(t, amps), float(drift), dt)


# -- validation runs ----------------------------------------------------------

def drive_hamiltonian(sys):
    """Lab-frame harmonic Hamiltonian of a DriveSystem (no RWA)."""
    H0 = np.diag([sys.omega0 - sys.omegaA / 2, sys.omega0 + sys.omegaA / 2]).astype(complex)
    V = np.array([[0, sys.OmegaD], [np.conj(sys.OmegaD), 0]], dtype=complex)
    return HarmonicHamiltonian(H0, ((V, sys.omegaC),))


def rescaled(sys, ratio=None):
    """Copy of ``sys`` in units of omegaA, global phase w0 dropped.

    With ``ratio`` set, |OmegaD|/omegaA is replaced by it and the phase kept.
    """
    from .driven import DriveSystem

    OmegaD = complex(sys.OmegaD) / sys.omegaA
    if ratio is not None:
        OmegaD = ratio * (OmegaD / abs(OmegaD) if OmegaD != 0 else 1.0)
    return DriveSystem(0.0, 1.0, OmegaD, sys.omegaC / sys.omegaA)


def rabi_period(sys):
    return 2 * np.pi / sys.OmegaGRt


@dataclass(frozen=True)
class FidelityResult:
    ratio: float
    max_error: float
    bound: float
    max_norm_drift: float

    @property
    def within_bound(self):
        return self.max_error <= self.bound


def rwa_fidelity(sys, c0=(1.0, 0.0), periods=10, tol=1e-10, samples_per_period=200):
    """Max-abs population gap between the full TDSE and the back-rotated RWA."""
    from .driven import solve_driven

    H = drive_hamiltonian(sys)
    T = periods * rabi_period(sys)
    dt = choose_dt(H.omega_max, T, tol, omega_err=sys.omegaA / 2 + abs(sys.OmegaD))
    spec = IntegratorSpec(dt, T)
    stride = max(1, int(spec.n_steps // (periods * samples_per_period)))
    spec = IntegratorSpec(dt, T, stride)
    res = integrate_tdse(H, c0, spec)
    ref = solve_driven(sys, c0, res.trace.t)
    err = float(np.max(np.abs(res.trace.populations - np.abs(ref) ** 2)))
    ratio = abs(sys.OmegaD) / sys.omegaA
    return FidelityResult(ratio, err, 5 * ratio, res.max_norm_drift)


def step_halving_ratio(H, c0, t_end, dt, records=50):
    """err(dt vs dt/2) / err(dt/2 vs dt/4) at shared record times; ~16 for RK4."""
    n = IntegratorSpec(dt, t_end).n_steps
    stride = max(1, n // records)
    runs = [integrate_tdse(H, c0, IntegratorSpec(t_end / (n * m), t_end, stride * m)).trace.amplitudes
            for m in (1, 2, 4)]
    k = min(len(r) for r in runs)
    e1 = np.max(np.abs(runs[0][:k] - runs[1][:k]))
    e2 = np.max(np.abs(runs[1][:k] - runs[2][:k]))
    return float(e1 / e2), float(e1), float(e2)


def dominant_frequency(t, signal):
    """Frequency (rad/s) of the strongest non-DC component, refined off-grid."""
    from scipy.optimize import minimize_scalar

    x = np.asarray(signal, float) - np.mean(signal)
    dt = t[1] - t[0]
    n = len(x)
    # Hann taper keeps the negative-frequency image from pulling the peak
    x = x * np.hanning(n)
    spec = np.abs(np.fft.rfft(x))
    spec[0] = 0.0
    k = int(np.argmax(spec))
    bin_w = 2 * np.pi / (n * dt)

    def neg_power(w):
        return -abs(np.sum(x * np.exp(-1j * w * t)))

    lo, hi = max((k - 1.5) * bin_w, 0.0), (k + 1.5) * bin_w
    return float(minimize_scalar(neg_power, bounds=(lo, hi), method="bounded",
                                 options={"xatol": bin_w * 1e-7}).x)


@dataclass(frozen=True)
class ArbitrationResult:
    G: float
    deltaC_frac: float
    measured: float          # rad/s
    predicted_single: float  # G*wD reading, rad/s
    predicted_double: float  # 2*G*wD reading, rad/s
    halving_ratio: float
    max_norm_drift: float

    @property
    def verdict(self):
        d1 = abs(self.measured - self.predicted_single)
        d2 = abs(self.measured - self.predicted_double)
        return "G*wD" if d1 < d2 else "2*G*wD"

    def as_dict(self):
        from .presets import to_microelectronvolts as ueV

        return {
            "G": self.G,
            "deltaC_frac": self.deltaC_frac,
            "measured_split_rad_s": self.measured,
            "measured_split_ueV": float(ueV(self.measured)),
            "predicted_G_wD_rad_s": self.predicted_single,
            "predicted_G_wD_ueV": float(ueV(self.predicted_single)),
            "predicted_2G_wD_rad_s": self.predicted_double,
            "predicted_2G_wD_ueV": float(ueV(self.predicted_double)),
            "verdict": self.verdict,
            "step_halving_ratio": self.halving_ratio,
            "max_norm_drift": self.max_norm_drift,
        }


def arbitrate_ammonia_factor(G=2e6, deltaC_frac=0.06, periods=20, tol=1e-9):
    """Integrate the driven-ammonia Hamiltonian in the |1>,|2> basis and measure the split.

    The drive sits on the diagonal there; the population of the upper
    free-molecule level oscillates at the generalized Rabi frequency, whose
    value is read off a Fourier transform and compared with both readings.
    Runs in units of omegaA; the result is scaled back to rad/s.
    """
    from .presets import (AMMONIA_DRIVE_TYPICAL, OMEGA_AMMONIA, ammonia_canonical_parts,
                          eta_matrix, preset_driven_ammonia)

    wA = OMEGA_AMMONIA
    H0, V = ammonia_canonical_parts(G / wA, omegaA=1.0, omegaD=AMMONIA_DRIVE_TYPICAL)
    wC = 1.0 - deltaC_frac
    H = HarmonicHamiltonian(H0, ((V, wC),))
    eta = eta_matrix()
    c0 = eta[:, 1]  # lower free level
    single = preset_driven_ammonia(G, deltaC_frac, factor=1).OmegaGRt
    double = preset_driven_ammonia(G, deltaC_frac, factor=2).OmegaGRt
    T = periods * 2 * np.pi / (min(single, double) / wA)
    dt = choose_dt(H.omega_max, T, tol, omega_err=0.5 + G * AMMONIA_DRIVE_TYPICAL / wA)
    spec = IntegratorSpec(dt, T, 1)
    stride = max(1, int(0.25 / spec.step))
    res = integrate_tdse(H, c0, IntegratorSpec(dt, T, stride))
    upper = np.abs(res.trace.amplitudes @ eta[:, 0].conj()) ** 2
    measured = dominant_frequency(res.trace.t, upper) * wA
    horizon = 2 * np.pi / (single / wA)
    ratio, _, _ = step_halving_ratio(H, c0, horizon, 2 * np.pi / (100 * H.omega_max))
    return ArbitrationResult(G, deltaC_frac, measured, single, double, ratio, res.max_norm_drift)
