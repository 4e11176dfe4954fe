"""Thermodynamically consistent dissipators for a static Hamiltonian.

Building the jump operators from the transition operators of H makes the
open-system map commute with the free evolution (time-translation
covariance), and detailed-balance rates then force the fixed point to be
the Gibbs state.  A sigma_x jump operator on a sigma_z Hamiltonian breaks
the covariance, which the residual exposes immediately.
"""

import math

import numpy as np

from covlind import (
    Channel,
    DissipatorSpec,
    build_dissipator,
    check_time_translation,
    detailed_balance_rates,
    fixed_point,
    hermitian_eig,
    liouvillian,
    qubit_ops,
    static_eigenoperators,
)

Q = qubit_ops()
rng = np.random.default_rng(7)

d, beta = 4, 0.9
h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
h = 0.5 * (h + h.conj().T)

eset = static_eigenoperators(h)
channels = []
seen = set()
for op, f, inv, pair in zip(eset.ops, eset.freqs, eset.invariant_flags, eset.pairs):
    if inv or f <= 0 or tuple(sorted(pair)) in seen:
        continue
    seen.add(tuple(sorted(pair)))
    (gd, gu), = detailed_balance_rates([f], beta, [0.4])
    channels.append(Channel(op, gd, gu))
print(f"random {d}-level Hamiltonian, beta = {beta}: "
      f"{len(channels)} detailed-balance channels")

spec = DissipatorSpec(channels=channels)
l_super = liouvillian(h, build_dissipator(spec))

resid = check_time_translation(l_super, h, t=0.7, s=2.1)
print(f"time-translation residual of the eigenoperator dissipator: {resid:.2e}")

bad = DissipatorSpec(channels=[Channel(Q["sx"] / math.sqrt(2), 1.0)])
l_bad = liouvillian(0.5 * Q["sz"], build_dissipator(bad))
print("same check with a sigma_x channel on a sigma_z Hamiltonian "
      f"(not an eigenoperator): {check_time_translation(l_bad, 0.5 * Q['sz'], 1.0, 1.0):.2f}")

res = fixed_point(spec, eset)
w, v = hermitian_eig(h)
p = np.exp(-beta * (w - w.min()))
p /= p.sum()
gibbs = (v * p) @ v.conj().T
print(f"\nfixed point vs Gibbs state at the same beta: "
      f"max deviation {np.max(np.abs(res.state.data - gibbs)):.2e}")
print(f"dissipator residual on the fixed point: {res.residual:.2e}")
print(f"channel log rate ratios (eta = beta * Bohr frequency): "
      f"{[round(float(x), 4) for x in res.deltas]}")
