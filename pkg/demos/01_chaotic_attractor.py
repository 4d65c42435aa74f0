#!/usr/bin/env python3
"""Integrate the Newton-Leipnik system and look at its double attractor.

The classic initial point (0.349, 0, -0.3) settles onto a bounded two-lobed
attractor.  This script integrates with fixed-step RK4, prints a few
trajectory statistics, and (when matplotlib is importable) saves time-series
and 3-D phase portraits next to this file.
"""

import numpy as np

import leipnik as lp

p = lp.Params(a=0.4, alpha=0.175)
run = lp.integrate_ode([0.349, 0.0, -0.3], p, dt=1e-3, t_end=100.0)

u = run.states
print(f"integrated {len(run.t) - 1} steps to t={run.t[-1]:g}")
for i, name in enumerate(("u1", "u2", "u3")):
    print(f"  {name}: min {u[:, i].min():+.4f}  max {u[:, i].max():+.4f}")
print(f"  sup-norm {np.abs(u).max():.4f} (stays bounded, well under 1)")

# The two lobes wind around the symmetric equilibria with u3 < 0.
eq = lp.find_equilibria(p)
negatives = [r.point for r in eq if r.point[2] < 0]
print("attractor lobes sit near:", [np.round(pt, 4).tolist() for pt in negatives])

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping figures")
else:
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(8, 6))
    for i, (ax, name) in enumerate(zip(axes, ("u1", "u2", "u3"))):
        ax.plot(run.t, u[:, i], lw=0.5)
        ax.set_ylabel(name)
    axes[-1].set_xlabel("t")
    fig.savefig("attractor_states.png", dpi=130)

    fig = plt.figure(figsize=(6, 5))
    ax = fig.add_subplot(projection="3d")
    ax.plot(u[:, 0], u[:, 1], u[:, 2], lw=0.3)
    ax.set_xlabel("u1"), ax.set_ylabel("u2"), ax.set_zlabel("u3")
    fig.savefig("attractor_phase.png", dpi=130)
    print("wrote attractor_states.png, attractor_phase.png")
