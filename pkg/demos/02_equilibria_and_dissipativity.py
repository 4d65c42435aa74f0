#!/usr/bin/env python3
"""Equilibria, their spectra, and the volume-contraction law.

Finds all five equilibria by multi-seeded Newton iteration, classifies each
through the Jacobian eigenvalues, and checks the dissipativity story: the
divergence is the constant alpha - a - 0.4, so any advected phase-space
volume must contract like exp(divergence * t).
"""

import numpy as np

import leipnik as lp

p = lp.Params(a=0.4, alpha=0.175)

print("equilibria (a=0.4, alpha=0.175):")
for r in lp.find_equilibria(p):
    eigs = ", ".join(f"{z.real:+.5f}{z.imag:+.5f}i" for z in r.eigenvalues)
    print(f"  {np.round(r.point, 6).tolist()}  stable={r.stable}  eigs: {eigs}")
print("none is asymptotically stable: the flow never settles to a point.\n")

div = lp.divergence(p)
print(f"divergence = alpha - a - 0.4 = {div}")
print(f"dissipative: {lp.dissipative(p)}")

# Advect a tiny parallelepiped and compare with the closed-form law.
t, vol = lp.ensemble_volume([0.349, 0.0, -0.3], p, edge=1e-4, dt=1e-3, t_end=2.0)
slope = np.polyfit(t, np.log(vol), 1)[0]
print(f"measured log-volume slope over [0, 2]: {slope:.4f} (law predicts {div})")
print(f"volume_decay(2.0): {lp.volume_decay(2.0, vol[0], p):.3e}  measured: {vol[-1]:.3e}")

# A stability certificate that never needs the eigenvalues themselves:
# trace, det, and compound det all negative.
rep = lp.hurwitz_certificate(np.diag([-1.0, -2.0, -3.0]))
print(f"\ncertificate on diag(-1,-2,-3): trace={rep.trace} det={rep.det} "
      f"compound_det={rep.compound_det} -> stable={rep.stable}")
rep = lp.hurwitz_certificate(lp.jacobian([0, 0, 0], p))
print(f"certificate at the origin's Jacobian: stable={rep.stable} (a saddle-focus)")
