"""
Probing a dressed doublet with a third level
============================================

A weak probe couples one level of a strongly coupled pair to a third level.
Launching in a dressed state gives a single Lorentzian line; the two dressed
states give lines split by the generalized Rabi frequency.
"""

import numpy as np

from tsslab.threelevel import (ThreeLevelConfig, eigenstate_sweep, linewidth_study, optimal_transfer,
                               predicted_centers, sweep_probe)

for deltaC in (0.0, 0.4):
    for scenario in ("probe_e", "probe_g"):
        fits = {lab: eigenstate_sweep(deltaC, 1.0, 0.05, scenario, lab, n_points=400).fits[0] for lab in "PN"}
        pc = predicted_centers(deltaC, 1.0, scenario)
        print(f"dC={deltaC} {scenario}: "
              + ", ".join(f"{lab} {f.center:+.4f} (pred {pc[lab]:+.4f}, Q {f.Q:.4f})" for lab, f in fits.items()))

# From a bare level both lines appear, each short of full transfer.
res = sweep_probe(ThreeLevelConfig.from_detunings(0.0, 0.0, c0=(1, 0, 0)), np.linspace(-1.5, 1.5, 400))
print("bare launch peaks:", [(round(f.center, 3), round(f.amplitude, 3)) for f in res.fits])

# On the line centre a dressed launch empties the lower pair almost entirely.
cfg = ThreeLevelConfig.from_detunings(0.0, -0.5, c0=(2 ** -0.5, 2 ** -0.5, 0))
x, p = optimal_transfer(cfg, -0.5, 0.02)
print(f"best transfer {p:.5f} at {x:+.5f}")

# Width trends, reported as data.
for row in linewidth_study(deltaCs=(0.0,), D_Cs=(0.5, 1.0, 2.0), D_Ps=(0.05,), n_points=300):
    print(f"D_C={row['D_C']} {row['init']}: Q={row['Q']:.5f}")
