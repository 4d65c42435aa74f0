"""Newton-Leipnik vector field, Jacobian, dissipativity, and equilibria.

The system (states u1, u2, u3, damping a, growth coefficient alpha):

    du1/dt = -a*u1 + u2 + 10*u2*u3
    du2/dt = -u1 - 0.4*u2 + 5*u1*u3
    du3/dt = alpha*u3 - 5*u1*u2

At the classic parameter values a=0.4, alpha=0.175 it carries a double
strange attractor and five unstable equilibria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg3 import eigenvalues3

__all__ = [
    "Params",
    "EquilibriumReport",
    "reaction_rhs",
    "jacobian",
    "divergence",
    "dissipative",
    "volume_decay",
    "find_equilibria",
]


@dataclass(frozen=True)
class Params:
    """Model and control constants.

    a, alpha are the vector-field coefficients; k >= 0 is the controller
    gain; d1, d2, d3 > 0 are the diffusion coefficients of the spatially
    extended system.
    """

    a: float = 0.4
    alpha: float = 0.175
    k: float = 5.0
    d1: float = 0.1
    d2: float = 0.1
    d3: float = 0.1

    def __post_init__(self):
        for name in ("a", "alpha", "k", "d1", "d2", "d3"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"parameter {name} must be finite")
        if self.k < 0:
            raise ValueError("controller gain k must be >= 0")
        if min(self.d1, self.d2, self.d3) <= 0:
            raise ValueError("diffusion coefficients d1, d2, d3 must be > 0")

    @property
    def d(self) -> np.ndarray:
        return np.array([self.d1, self.d2, self.d3])


def reaction_rhs(u, p: Params) -> np.ndarray:
    """Vector field f(u).  Accepts shape (3,) states or (3, n) field samples."""
    u = np.asarray(u, dtype=float)
    u1, u2, u3 = u[0], u[1], u[2]
    return np.stack(
        [
            -p.a * u1 + u2 + 10.0 * u2 * u3,
            -u1 - 0.4 * u2 + 5.0 * u1 * u3,
            p.alpha * u3 - 5.0 * u1 * u2,
        ]
    )


def jacobian(u, p: Params) -> np.ndarray:
    """Jacobian of the vector field at state u."""
    u = np.asarray(u, dtype=float)
    u1, u2, u3 = float(u[0]), float(u[1]), float(u[2])
    return np.array(
        [
            [-p.a, 1.0 + 10.0 * u3, 10.0 * u2],
            [-1.0 + 5.0 * u3, -0.4, 5.0 * u1],
            [-5.0 * u2, -5.0 * u1, p.alpha],
        ]
    )


def divergence(p: Params) -> float:
    """div f = alpha - a - 0.4, independent of the state."""
    return p.alpha - p.a - 0.4


def dissipative(p: Params) -> bool:
    """True iff phase-space volumes contract (divergence < 0)."""
    return divergence(p) < 0.0


def volume_decay(t: float, v0: float, p: Params) -> float:
    """Phase-space volume v0 * exp(divergence * t) of an advected region."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if v0 <= 0:
        raise ValueError("v0 must be > 0")
    return v0 * math.exp(divergence(p) * t)


@dataclass(frozen=True)
class EquilibriumReport:
    """A converged equilibrium plus its linearization summary."""

    point: np.ndarray
    eigenvalues: np.ndarray
    stable: bool
    residual: float


def _jacobian_batch(x: np.ndarray, p: Params) -> np.ndarray:
    n = x.shape[0]
    J = np.empty((n, 3, 3))
    u1, u2, u3 = x[:, 0], x[:, 1], x[:, 2]
    J[:, 0, 0] = -p.a
    J[:, 0, 1] = 1.0 + 10.0 * u3
    J[:, 0, 2] = 10.0 * u2
    J[:, 1, 0] = -1.0 + 5.0 * u3
    J[:, 1, 1] = -0.4
    J[:, 1, 2] = 5.0 * u1
    J[:, 2, 0] = -5.0 * u2
    J[:, 2, 1] = -5.0 * u1
    J[:, 2, 2] = p.alpha
    return J


def find_equilibria(
    p: Params,
    *,
    box: float = 1.0,
    seeds_per_axis: int = 21,
    tol: float = 1e-12,
    max_iter: int = 50,
    dedup_tol: float = 1e-6,
) -> list[EquilibriumReport]:
    """All roots of f(u) = 0 found by Newton iteration from a seed grid.

    Seeds form a uniform ``seeds_per_axis``^3 grid over [-box, box]^3.
    Seeds whose Newton step hits a near-singular Jacobian (|det| < 1e-14)
    or leaves the finite range are abandoned.  Converged roots (residual
    sup-norm < tol) are deduplicated with pairwise distance ``dedup_tol``,
    classified through the Jacobian spectrum, and returned sorted
    lexicographically by (u1, u2, u3).  An empty list is a valid outcome.
    """
    axis = np.linspace(-box, box, seeds_per_axis)
    g = np.meshgrid(axis, axis, axis, indexing="ij")
    x = np.stack([c.ravel() for c in g], axis=1)

    alive = np.ones(x.shape[0], dtype=bool)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(max_iter):
            if not alive.any():
                break
            f = reaction_rhs(x[alive].T, p).T
            res = np.max(np.abs(f), axis=1)
            J = _jacobian_batch(x[alive], p)
            det = np.linalg.det(J)
            good = np.isfinite(res) & (np.abs(det) >= 1e-14) & (np.abs(x[alive]).max(axis=1) < 1e6)
            # Drop singular/diverged seeds; keep converged ones where they are.
            idx = np.flatnonzero(alive)
            alive[idx[~good]] = False
            move = good & (res > tol)
            if not move.any():
                break
            midx = idx[move]
            steps = np.linalg.solve(J[move], f[move][..., None])[..., 0]
            x[midx] -= steps

        f = reaction_rhs(x.T, p).T
        res = np.max(np.abs(f), axis=1)
        converged = alive & np.isfinite(res) & (res < tol)

    # Deduplicate, keeping the best-converged representative of each cluster
    # (the untouched exact seed wins for roots that sit on the seed grid).
    candidates = sorted(zip(res[converged], map(tuple, x[converged])))
    roots: list[np.ndarray] = []
    for _, cand in candidates:
        cand = np.array(cand)
        if all(np.max(np.abs(cand - r)) > dedup_tol for r in roots):
            roots.append(cand)

    reports = []
    for r in sorted(roots, key=tuple):
        ev = eigenvalues3(jacobian(r, p))
        residual = float(np.max(np.abs(reaction_rhs(r, p))))
        reports.append(
            EquilibriumReport(
                point=r,
                eigenvalues=ev,
                stable=bool(np.max(ev.real) < 0.0),
                residual=residual,
            )
        )
    return reports
