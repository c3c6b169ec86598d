import numpy as np
import pytest

from tsslab import presets as P
from tsslab.driven import solve_driven
from tsslab.errors import ConvergenceError, ValidationError
from tsslab.oracle import (HarmonicHamiltonian, IntegratorSpec, arbitrate_ammonia_factor, choose_dt,
                           dominant_frequency, drive_hamiltonian, integrate_tdse, rabi_period, rescaled,
                           rwa_fidelity, step_halving_ratio)
from tsslab.static import StaticSystem, solve_matrix


def test_constant_diagonal_phases():
    lam = np.array([0.7, -0.3, 1.1])
    H = HarmonicHamiltonian(np.diag(lam))
    c0 = np.array([0.6, 0.0, 0.8])
    T = 20.0
    res = integrate_tdse(H, c0, IntegratorSpec(choose_dt(H.omega_max, T, 1e-12), T, 10))
    exact = c0 * np.exp(-1j * np.outer(res.trace.t, lam))
    np.testing.assert_allclose(res.trace.amplitudes, exact, atol=1e-9)
    assert res.max_norm_drift < 1e-10


def test_static_system_matches_closed_form():
    s = StaticSystem(0.4, 0.3, 0.8, 1.1)
    c0 = np.array([1, 1j]) / np.sqrt(2)
    T = 20 * 2 * np.pi / s.OmegaGR
    H = HarmonicHamiltonian(s.hamiltonian)
    res = integrate_tdse(H, c0, IntegratorSpec(choose_dt(H.omega_max, T, 1e-11), T, 50))
    np.testing.assert_allclose(res.trace.amplitudes, solve_matrix(s, c0, res.trace.t), atol=1e-9)


def test_python_and_compiled_paths_agree():
    H = HarmonicHamiltonian(np.diag([-0.5, 0.5]), ((np.array([[0, 0.05], [0.05, 0]]), 0.97),))
    spec = IntegratorSpec(0.01, 30.0, 25)
    fast = integrate_tdse(H, [1, 0], spec)
    slow = integrate_tdse(lambda t: H(t), [1, 0], spec, omega_max=H.omega_max)
    np.testing.assert_allclose(fast.trace.amplitudes, slow.trace.amplitudes, atol=1e-13)
    assert fast.max_norm_drift == pytest.approx(slow.max_norm_drift, abs=1e-15)


def test_drift_abort():
    H = HarmonicHamiltonian(np.diag([1.0, -1.0]))
    dt = 2 * np.pi / 50
    with pytest.raises(ConvergenceError, match="norm drift"):
        integrate_tdse(H, [1, 0], IntegratorSpec(dt, 200 * dt))
    with pytest.raises(ConvergenceError):
        integrate_tdse(lambda t: H(t), [1, 0], IntegratorSpec(dt, 200 * dt), omega_max=1.0)


def test_resolution_and_spec_validation():
    H = HarmonicHamiltonian(np.diag([1.0, -1.0]))
    with pytest.raises(ValidationError, match="carrier limit"):
        integrate_tdse(H, [1, 0], IntegratorSpec(0.2, 1.0))
    for bad in [dict(dt=0, t_end=1), dict(dt=1, t_end=-1), dict(dt=0.1, t_end=1, record_stride=0),
                dict(dt=0.1, t_end=1, method="rk45")]:
        with pytest.raises(ValidationError):
            IntegratorSpec(**bad)
    with pytest.raises(ValidationError):
        integrate_tdse(H, [1, 0, 0], IntegratorSpec(0.01, 1.0))
    with pytest.raises(ValidationError):
        integrate_tdse(H, [1, 1], IntegratorSpec(0.01, 1.0))


def test_choose_dt():
    assert choose_dt(1.0, 1e-9, 1e-10) == pytest.approx(2 * np.pi / 50)
    dt = choose_dt(1.0, 1e4, 1e-10)
    assert dt == pytest.approx((120e-10 / 1e4) ** 0.25)
    assert choose_dt(10.0, 1e4, 1e-10, omega_err=1.0) <= 2 * np.pi / 500


def test_spec_grid_lands_on_t_end():
    spec = IntegratorSpec(0.3, 1.0)
    assert spec.n_steps == 4 and spec.step == pytest.approx(0.25)
    assert IntegratorSpec(0.25, 1.0).n_steps == 4


@pytest.mark.parametrize("name", ["proton-driven", "cesium-clock", "ammonia-driven"])
def test_fourth_order_convergence(name):
    sys = rescaled(P.build_preset(name), ratio=0.05)
    H = drive_hamiltonian(sys)
    ratio, e1, e2 = step_halving_ratio(H, [1, 0], 2 * rabi_period(sys) / 10, 2 * np.pi / (60 * H.omega_max))
    assert 12 < ratio < 20
    assert e2 < e1


def test_rescaled_keeps_shape():
    d = P.preset_driven_proton()
    r = rescaled(d)
    assert r.omegaA == 1 and r.omega0 == 0
    assert r.OmegaGRt * d.omegaA == pytest.approx(d.OmegaGRt, rel=1e-12)
    t = np.linspace(0, 3 * rabi_period(d), 31)
    np.testing.assert_allclose(np.abs(solve_driven(d, [1, 0], t)) ** 2,
                               np.abs(solve_driven(r, [1, 0], t * d.omegaA)) ** 2, atol=1e-9)
    assert abs(rescaled(d, 0.01).OmegaD) == pytest.approx(0.01)


@pytest.mark.parametrize("ratio", [1e-2, 5e-3])
def test_rwa_fidelity_bound(ratio):
    f = rwa_fidelity(rescaled(P.preset_cesium(1, 0), ratio), periods=10)
    assert f.within_bound and f.max_error < 5 * ratio
    assert f.max_error > 0


def test_rwa_error_shrinks_with_drive():
    base = rescaled(P.preset_cesium(1, 0))
    e1 = rwa_fidelity(rescaled(base, 1e-2), periods=3).max_error
    e2 = rwa_fidelity(rescaled(base, 5e-3), periods=3).max_error
    assert 0.3 < e2 / e1 < 0.7


def test_far_detuned_drive_barely_moves_population():
    sys = rescaled(P.preset_cesium(1, 0.3), ratio=1e-2)
    f = rwa_fidelity(sys, periods=3)
    assert f.within_bound
    t = np.linspace(0, 3 * rabi_period(sys), 400)
    assert np.max(np.abs(solve_driven(sys, [1, 0], t)[:, 1]) ** 2) < 4e-3


def test_dominant_frequency_off_grid():
    t = np.arange(4000) * 0.05
    w = 1.2345
    assert dominant_frequency(t, 0.3 + np.cos(w * t + 0.4)) == pytest.approx(w, rel=1e-6)


def test_ammonia_arbitration():
    r = arbitrate_ammonia_factor()
    assert r.verdict == "G*wD"
    assert r.measured == pytest.approx(r.predicted_single, rel=0.01)
    assert r.predicted_double > 1.3 * r.predicted_single
    assert 12 < r.halving_ratio < 20 and r.max_norm_drift < 1e-6
    d = r.as_dict()
    assert d["predicted_2G_wD_ueV"] == pytest.approx(9.5, rel=0.01)


def test_arbitration_on_resonance_scales_linearly():
    a = arbitrate_ammonia_factor(G=1e6, deltaC_frac=0.0, periods=10)
    b = arbitrate_ammonia_factor(G=2e6, deltaC_frac=0.0, periods=10)
    assert b.measured / a.measured == pytest.approx(2.0, rel=0.01)
    assert a.measured == pytest.approx(1e6 * P.AMMONIA_DRIVE_TYPICAL, rel=0.01)
