"""
Static two-state systems
========================

Energy gaps, precession and beat lengths for the time-independent presets.
"""

import numpy as np

from tsslab import presets as P
from tsslab.reports import energy_report
from tsslab.static import abcd_coefficients, is_stationary, solve_matrix

# A proton in 3 T: the two spin levels sit 2*omega11 apart.
for name in ("proton-static", "ammonia-free", "cesium-clock"):
    rep = energy_report(name)
    print(f"{name:15s} gap {rep['gap_ueV']:9.4f} ueV (quoted {rep['quoted']['gap_ueV']})")

# An equal superposition precesses; P(+x) swings fully at 2*omega11.
proton = P.preset_proton_static()
t = np.linspace(0, 8e-9, 9)
c = solve_matrix(proton, np.array([1, 1]) / np.sqrt(2), t)
print("P(+x) every ns:", np.round(0.5 * np.abs(c[:, 0] + c[:, 1]) ** 2, 3))

# Free ammonia: launching in an eigenvector gives a stationary state,
# which shows up as two vanishing ABCD coefficients.
nh3 = P.preset_free_ammonia()
for label, v in (("xi_P", nh3.xi_P), ("xi_N", nh3.xi_N), ("|1>", np.array([1, 0]))):
    print(label, "->", is_stationary(abcd_coefficients(nh3, v)))

# Coupled waveguides obey the same equation with z in place of t.
for pair in ("equal", "unequal"):
    wg = P.waveguide_pair(pair)
    z = np.linspace(0, 2 * np.pi / wg.beat_wavenumber, 5)
    right = np.abs(P.evolve_waveguides(wg, [1, 0], z)[:, 1]) ** 2
    print(f"{pair:8s} beat {wg.beat_wavenumber:.3f}/mm, depth {wg.modulation_depth():.3f},",
          "power right:", np.round(right, 3))
