"""Coupling-probe simulation on a three-level ladder in the rotating frame.

A coupling field (detuning deltaC, strength D_C) dresses the lower pair
|g>, |e>; a weak probe (strength D_P) couples either |e> or |g> to an upper
level |r>.  Sweeping the probe and recording the largest |r> population
reached maps out the dressed levels as Lorentzian lines.

Probe detuning on the sweep axis is the probe frequency minus the bare
transition frequency, so it is the negative of the detuning that enters the
Hamiltonian.  With that axis the dressed lines sit at

    probe_e:  +deltaC/2 - lambda_{P,N}
    probe_g:  -deltaC/2 - lambda_{P,N}

where lambda_{P,N} = +/- sqrt(deltaC**2 + |D_C|**2)/2.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from .errors import FitError, ValidationError
from .linalg import eig2_hermitian, eig3_hermitian
from .static import as_state
from .trace import AmplitudeTrace

SCENARIOS = ("probe_e", "probe_g")


@dataclass(frozen=True)
class ThreeLevelConfig:
    omega_eg: float
    omega_re: float
    D_C: complex
    D_P: complex
    omega_C: float
    omega_P: float
    scenario: str = "probe_e"
    c0: tuple = (1.0, 0.0, 0.0)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValidationError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        as_state(self.c0, dim=3)

    @classmethod
    def from_detunings(cls, deltaC, probe_detuning, D_C=1.0, D_P=0.05,
                       scenario="probe_e", c0=(1.0, 0.0, 0.0), omega_eg=100.0, omega_re=150.0):
        """Build from the coupling detuning and the probe offset on the sweep axis."""
        target = omega_re if scenario == "probe_e" else omega_eg + omega_re
        return cls(omega_eg, omega_re, complex(D_C), complex(D_P), omega_eg - deltaC,
                   target + probe_detuning, scenario, tuple(complex(x) for x in c0))

    @property
    def deltaC(self):
        return self.omega_eg - self.omega_C

    @property
    def deltaP(self):
        """Detuning entering the Hamiltonian: transition minus probe frequency."""
        if self.scenario == "probe_e":
            return self.omega_re - self.omega_P
        return self.omega_eg + self.omega_re - self.omega_P

    @property
    def probe_detuning(self):
        return -self.deltaP

    def with_probe_detuning(self, x):
        target = self.omega_re if self.scenario == "probe_e" else self.omega_eg + self.omega_re
        return replace(self, omega_P=target + x)


def build_rwa_hamiltonian(cfg: ThreeLevelConfig):
    dC, dP = cfg.deltaC, cfg.deltaP
    DC, DP = complex(cfg.D_C) / 2, complex(cfg.D_P) / 2
    H = np.zeros((3, 3), dtype=complex)
    H[0, 0], H[1, 1] = -dC / 2, dC / 2
    H[0, 1], H[1, 0] = DC, np.conj(DC)
    if cfg.scenario == "probe_e":
        H[1, 2], H[2, 1] = DP, np.conj(DP)
        H[2, 2] = dP + dC / 2
    else:
        H[0, 2], H[2, 0] = DP, np.conj(DP)
        H[2, 2] = dP - dC / 2
    return H


def coupling_block(deltaC, D_C):
    D = complex(D_C) / 2
    return np.array([[-deltaC / 2, D], [np.conj(D), deltaC / 2]], dtype=complex)


def coupling_eigenstates(deltaC, D_C):
    """{'P': (lambda, 3-vector), 'N': ...} for the dressed lower pair, with C_r = 0."""
    es = eig2_hermitian(coupling_block(deltaC, D_C))
    out = {}
    for k, label in enumerate("PN"):
        out[label] = (float(es.values[k]), np.append(es.vectors[:, k], 0.0))
    return out


def predicted_centers(deltaC, D_C, scenario="probe_e"):
    """Line positions on the probe-detuning axis for the P and N dressed states."""
    lam = 0.5 * np.hypot(deltaC, abs(D_C))
    shift = deltaC / 2 if scenario == "probe_e" else -deltaC / 2
    return {"P": shift - lam, "N": shift + lam}


def _modes(cfg):
    es = eig3_hermitian(build_rwa_hamiltonian(cfg))
    d0 = es.vectors.conj().T @ np.asarray(cfg.c0, dtype=complex)
    return es, d0


def evolve3(cfg: ThreeLevelConfig, t):
    es, d0 = _modes(cfg)
    t = np.asarray(t, dtype=float)
    ph = np.exp(-1j * np.multiply.outer(t, es.values))
    return (ph * d0) @ es.vectors.T


def evolve3_trace(cfg, t_end, n=2000):
    t = np.linspace(0.0, t_end, n)
    return AmplitudeTrace(t, evolve3(cfg, t))


def slow_gap(values, rel_tol=1e-12):
    """Smallest nonzero eigenvalue spacing."""
    gaps = np.abs(np.subtract.outer(values, values))[np.triu_indices(len(values), 1)]
    scale = max(np.max(np.abs(values)), 1.0)
    gaps = gaps[gaps > rel_tol * scale]
    return float(np.min(gaps)) if gaps.size else 0.0


def max_upper_population(cfg, n_samples=2000, refine=True):
    """max_t |C_r(t)|^2 over a horizon of two slowest population cycles."""
    es, d0 = _modes(cfg)
    amp_r = es.vectors[2, :] * d0
    if np.max(np.abs(amp_r)) == 0.0:
        return 0.0
    gap = slow_gap(es.values)
    if gap == 0.0:
        return float(abs(np.sum(amp_r)) ** 2)
    horizon = 4 * np.pi / gap
    t = np.linspace(0.0, horizon, n_samples)

    def pop(tt):
        return np.abs(np.exp(-1j * np.multiply.outer(tt, es.values)) @ amp_r) ** 2

    p = pop(t)
    i = int(np.argmax(p))
    best = float(p[i])
    if refine:
        lo, hi = t[max(i - 1, 0)], t[min(i + 1, n_samples - 1)]
        r = minimize_scalar(lambda s: -pop(np.array([s]))[0], bounds=(lo, hi), method="bounded",
                            options={"xatol": 1e-12 * max(horizon, 1.0)})
        best = max(best, -float(r.fun))
    return best


@dataclass(frozen=True)
class LorentzianFit:
    center: float
    Q: float
    amplitude: float
    residual_rms: float

    def as_dict(self):
        return {"center": self.center, "Q": self.Q, "amplitude": self.amplitude,
                "residual_rms": self.residual_rms}


def lorentzian(x, center, Q, amplitude):
    return amplitude * Q * Q / (Q * Q + (np.asarray(x) - center) ** 2)


@dataclass(frozen=True)
class ProbeSweepResult:
    detunings: np.ndarray
    max_population_r: np.ndarray
    scenario: str
    init_label: str
    fits: list = field(default_factory=list)


def _seed(x, y):
    i = int(np.argmax(y))
    peak = y[i]
    half = peak / 2
    j = i
    while j > 0 and y[j] > half:
        j -= 1
    k = i
    while k < len(y) - 1 and y[k] > half:
        k += 1
    width = max((x[k] - x[j]) / 2, (x[1] - x[0]) / 2)
    return x[i], width, peak


def fit_lorentzian(x, y, max_iter=2000):
    """Levenberg-Marquardt fit of amplitude*Q^2/(Q^2+(x-center)^2)."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    x0 = np.array(_seed(x, y))
    scale = np.array([x0[1], x0[1], max(x0[2], 1e-300)])

    def resid(p):
        c, q, a = p * scale
        return lorentzian(x, c, q, a) - y

    res = least_squares(resid, x0 / scale, method="lm", xtol=1e-14, ftol=1e-14, gtol=1e-14,
                        max_nfev=max_iter)
    c, q, a = res.x * scale
    rms = float(np.sqrt(np.mean(res.fun ** 2)))
    if res.status <= 0:
        raise FitError(f"Lorentzian fit did not converge: {res.message}",
                       best=LorentzianFit(float(c), abs(float(q)), float(a), rms))
    return LorentzianFit(float(c), abs(float(q)), float(a), rms)


def detect_peaks(y, rel_threshold=0.1):
    y = np.asarray(y)
    inner = (y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]) & (y[1:-1] > rel_threshold * np.max(y))
    return np.flatnonzero(inner) + 1


def fit_peaks(x, y, rel_threshold=0.1):
    """Fit every detected peak on a window bounded by the neighbouring minima."""
    x, y = np.asarray(x), np.asarray(y)
    idx = detect_peaks(y, rel_threshold)
    fits = []
    for n, i in enumerate(idx):
        lo = 0 if n == 0 else idx[n - 1] + int(np.argmin(y[idx[n - 1]:i]))
        hi = len(y) if n == len(idx) - 1 else i + int(np.argmin(y[i:idx[n + 1]])) + 1
        fits.append(fit_lorentzian(x[lo:hi], y[lo:hi]))
    return fits


def sweep_probe(template: ThreeLevelConfig, detunings, init_label="custom", n_samples=2000,
                fit=True, rel_threshold=0.1):
    detunings = np.asarray(detunings, dtype=float)
    if detunings.ndim != 1 or len(detunings) < 3:
        raise ValidationError("need at least three probe detunings")
    pops = np.array([max_upper_population(template.with_probe_detuning(x), n_samples)
                     for x in detunings])
    fits = fit_peaks(detunings, pops, rel_threshold) if fit else []
    return ProbeSweepResult(detunings, pops, template.scenario, init_label, fits)


def eigenstate_sweep(deltaC=0.0, D_C=1.0, D_P=0.05, scenario="probe_e", label="P",
                     span=3.0, n_points=600, n_samples=2000):
    """Sweep for a run launched in one dressed state, centred on its predicted line."""
    states = coupling_eigenstates(deltaC, D_C)
    _, vec = states[label]
    center = predicted_centers(deltaC, D_C, scenario)[label]
    cfg = ThreeLevelConfig.from_detunings(deltaC, 0.0, D_C, D_P, scenario, tuple(vec))
    x = np.linspace(center - span, center + span, n_points)
    return sweep_probe(cfg, x, init_label=init_label_for(vec, label), n_samples=n_samples)


def init_label_for(vec, label):
    from .static import classify_eigenvector

    kind = classify_eigenvector(vec[:2])
    return kind if kind != "complex" else f"xi_{label}"


def optimal_transfer(cfg: ThreeLevelConfig, guess, width):
    """Probe detuning maximizing max_t |C_r|^2 near ``guess``; returns (x, pop)."""
    r = minimize_scalar(lambda x: -max_upper_population(cfg.with_probe_detuning(x)),
                        bounds=(guess - width, guess + width), method="bounded",
                        options={"xatol": 1e-10})
    return float(r.x), -float(r.fun)


def linewidth_study(deltaCs=(0.0, 0.4), D_Cs=(0.5, 1.0, 2.0), D_Ps=(0.05,), scenario="probe_e",
                    span=None, n_points=400):
    """Fitted Q per grid cell for P- and N-launched runs; returns a list of dict rows."""
    if len(deltaCs) * len(D_Cs) * len(D_Ps) > 300:
        raise ValidationError("linewidth grid limited to 300 cells")
    rows = []
    for dC in deltaCs:
        for DC in D_Cs:
            for DP in D_Ps:
                for label in "PN":
                    w = span if span is not None else max(20 * abs(DP), 0.2)
                    try:
                        res = eigenstate_sweep(dC, DC, DP, scenario, label, span=w, n_points=n_points)
                        f = max(res.fits, key=lambda f: f.amplitude)
                        status = "ok"
                    except FitError as exc:
                        f, status = exc.best, "fit_error"
                    rows.append({
                        "deltaC": dC, "D_C": abs(DC), "D_P": abs(DP), "init": label,
                        "init_label": res.init_label if status == "ok" else label,
                        "predicted_center": predicted_centers(dC, DC, scenario)[label],
                        "center": f.center, "Q": f.Q, "amplitude": f.amplitude,
                        "residual_rms": f.residual_rms, "status": status,
                    })
    return rows
