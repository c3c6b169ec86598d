"""
Driven systems and quasi-energies
=================================

Rotating-wave solutions, the quasi-energy quartet and its spectral fingerprint.
"""

import numpy as np

from tsslab import presets as P
from tsslab.driven import mollow_positions, quasi_energies, quasi_energy_spectrum, solve_driven
from tsslab.trace import AmplitudeTrace

ueV = P.to_microelectronvolts

# Each driven preset, at the enhanced field and slightly red detuned.
for sys in (P.preset_driven_proton(), P.preset_cesium(1e4, 0.06), P.preset_driven_ammonia()):
    q = quasi_energies(sys)
    m = mollow_positions(sys)
    print(f"split {ueV(sys.OmegaGRt):.4g} ueV; quartet", np.round(q.as_array() / sys.omegaA, 4),
          f"; Mollow sidebands at omegaC +/- {m.blue - m.center:.4g} rad/s")

# A stationary launch puts one quasi-energy in each amplitude.
sys = P.preset_driven_proton()
rs = sys.rotated_static
T = 40 * 2 * np.pi / sys.OmegaGRt
t = np.linspace(0, T, 4096, endpoint=False)
for label, c0 in (("eigen_P", rs.xi_P), ("|1>", [1, 0])):
    spec = quasi_energy_spectrum(AmplitudeTrace(t, solve_driven(sys, c0, t)))
    print(label, [(f"c{p.component + 1}", f"{p.frequency:.5g}") for p in spec.peaks])
print("quartet", np.round(quasi_energies(sys).as_array(), -3))
