"""
Which drive strength does the ammonia Hamiltonian imply?
========================================================

Two readings of the driven-ammonia coupling differ by a factor of two. The
brute-force integrator settles it: no rotating frame, no RWA, just RK4 on the
Hamiltonian written in the free-molecule basis.
"""

from tsslab.oracle import arbitrate_ammonia_factor

for frac in (0.06, 0.0):
    r = arbitrate_ammonia_factor(G=2e6, deltaC_frac=frac).as_dict()
    print(f"deltaC/omegaA={frac}: measured {r['measured_split_ueV']:.4f} ueV, "
          f"G*wD {r['predicted_G_wD_ueV']:.4f}, 2G*wD {r['predicted_2G_wD_ueV']:.4f} -> {r['verdict']} "
          f"(step-halving ratio {r['step_halving_ratio']:.1f})")

# The quoted 9.5 ueV and 3.7e-6 ueV need the doubled coupling; the Hamiltonian gives the single one.
