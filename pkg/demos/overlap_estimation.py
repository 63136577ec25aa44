"""Overlap estimation: recovering <psi|U|psi> including its phase.

Amplitude estimation only yields |<psi|U|psi>|. Two extra amplitude
estimates on a controlled version of U fix the real and imaginary parts,
and precision is measured as a great-circle distance on the hemisphere
lift of the unit disk.
"""

import numpy as np

from qexpect import StatePrep, hemisphere_distance, overlap_estimate
from qexpect.amp_overlap import overlap_ledger_formula
from qexpect.baseline import one_ancilla_overlap
from qexpect.statevec import DenseUnitary

rng = np.random.default_rng(2)
u = DenseUnitary.random(2, rng)
v = StatePrep(DenseUnitary.random(2, rng))
psi = v.target_state.amplitudes
exact = complex(np.vdot(psi, u.matrix @ psi))
print(f"exact overlap        : {exact:.5f}")

for p in (0.1, 0.025):
    est = overlap_estimate(u, v, p, 0.9, rng)
    d = hemisphere_distance(est.value, exact)
    print(f"p={p:<6} estimate     : {est.value:.5f}  distance {d:.4f}  U-uses {est.ledger.u_uses}")

# The single-shot variant charges an exactly known amount.
est = overlap_estimate(u, v, 2.0**-4, None, rng)
print(f"single-shot p=2^-4 ledger {est.ledger.state_preps} preps / {est.ledger.u_uses} U-uses, "
      f"formula {overlap_ledger_formula(2.0**-4)}")

# Shot-noise baseline with the same number of U-uses as the p=0.025 run.
budget = overlap_estimate(u, v, 0.025, 0.9, rng).ledger.u_uses
base = one_ancilla_overlap(u, v, budget, rng)
print(f"one-ancilla, N={budget}: {base.value:.5f}  distance {hemisphere_distance(base.value, exact):.4f}")
