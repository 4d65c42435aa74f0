"""Fixed-step RK4 integration, Lyapunov spectra, and advected volumes.

Classical RK4 with a fixed step keeps trajectories reproducible run to run;
Lyapunov exponents come from tangent-space propagation with periodic
Gram-Schmidt renormalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import njit
from .errors import BlowUpError
from .model import Params

__all__ = [
    "OdeRun",
    "LyapunovSpectrum",
    "integrate_ode",
    "lyapunov_spectrum",
    "benettin_spectrum",
    "ensemble_volume",
]


@dataclass(frozen=True)
class OdeRun:
    """A recorded trajectory: t[i] = i*dt, states[i] = (u1, u2, u3)(t[i])."""

    t: np.ndarray
    states: np.ndarray
    dt: float


@dataclass(frozen=True)
class LyapunovSpectrum:
    """Exponents sorted descending; horizon is the total integrated time."""

    exponents: np.ndarray
    horizon: float


def _n_steps(t_end: float, dt: float) -> int:
    # floor with a tiny slack so t_end/dt that is integral up to roundoff
    # (e.g. 40/1e-3) lands on the intended step count
    return int(math.floor(t_end / dt + 1e-9))


@njit(cache=False)
def _f(a, alpha, u1, u2, u3):
    return (
        -a * u1 + u2 + 10.0 * u2 * u3,
        -u1 - 0.4 * u2 + 5.0 * u1 * u3,
        alpha * u3 - 5.0 * u1 * u2,
    )


@njit(cache=False)
def _rk4_traj(a, alpha, u1, u2, u3, dt, nsteps, out):
    """Fill out[(nsteps+1), 3]; return first non-finite step index or -1."""
    out[0, 0] = u1
    out[0, 1] = u2
    out[0, 2] = u3
    h = dt / 2.0
    for i in range(nsteps):
        a1, b1, c1 = _f(a, alpha, u1, u2, u3)
        a2, b2, c2 = _f(a, alpha, u1 + h * a1, u2 + h * b1, u3 + h * c1)
        a3, b3, c3 = _f(a, alpha, u1 + h * a2, u2 + h * b2, u3 + h * c2)
        a4, b4, c4 = _f(a, alpha, u1 + dt * a3, u2 + dt * b3, u3 + dt * c3)
        u1 = u1 + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        u2 = u2 + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        u3 = u3 + dt / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        if not (math.isfinite(u1) and math.isfinite(u2) and math.isfinite(u3)):
            return i + 1
        out[i + 1, 0] = u1
        out[i + 1, 1] = u2
        out[i + 1, 2] = u3
    return -1


@njit(cache=False)
def _jmul(a, alpha, u1, u2, u3, w, out):
    """out = J(u) @ w for the model Jacobian, 3x3."""
    j00 = -a
    j01 = 1.0 + 10.0 * u3
    j02 = 10.0 * u2
    j10 = -1.0 + 5.0 * u3
    j11 = -0.4
    j12 = 5.0 * u1
    j20 = -5.0 * u2
    j21 = -5.0 * u1
    j22 = alpha
    for c in range(3):
        out[0, c] = j00 * w[0, c] + j01 * w[1, c] + j02 * w[2, c]
        out[1, c] = j10 * w[0, c] + j11 * w[1, c] + j12 * w[2, c]
        out[2, c] = j20 * w[0, c] + j21 * w[1, c] + j22 * w[2, c]


@njit(cache=False)
def _rk4_tangent_chunk(a, alpha, state, w, dt, nsteps):
    """Advance state (3,) and tangent matrix w (3,3) in place; True if finite."""
    k1 = np.empty((3, 3))
    k2 = np.empty((3, 3))
    k3 = np.empty((3, 3))
    k4 = np.empty((3, 3))
    wt = np.empty((3, 3))
    h = dt / 2.0
    for _ in range(nsteps):
        u1 = state[0]
        u2 = state[1]
        u3 = state[2]
        a1, b1, c1 = _f(a, alpha, u1, u2, u3)
        _jmul(a, alpha, u1, u2, u3, w, k1)

        v1 = u1 + h * a1
        v2 = u2 + h * b1
        v3 = u3 + h * c1
        a2, b2, c2 = _f(a, alpha, v1, v2, v3)
        for r in range(3):
            for c in range(3):
                wt[r, c] = w[r, c] + h * k1[r, c]
        _jmul(a, alpha, v1, v2, v3, wt, k2)

        v1 = u1 + h * a2
        v2 = u2 + h * b2
        v3 = u3 + h * c2
        a3, b3, c3 = _f(a, alpha, v1, v2, v3)
        for r in range(3):
            for c in range(3):
                wt[r, c] = w[r, c] + h * k2[r, c]
        _jmul(a, alpha, v1, v2, v3, wt, k3)

        v1 = u1 + dt * a3
        v2 = u2 + dt * b3
        v3 = u3 + dt * c3
        a4, b4, c4 = _f(a, alpha, v1, v2, v3)
        for r in range(3):
            for c in range(3):
                wt[r, c] = w[r, c] + dt * k3[r, c]
        _jmul(a, alpha, v1, v2, v3, wt, k4)

        state[0] = u1 + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        state[1] = u2 + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        state[2] = u3 + dt / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4)
        for r in range(3):
            for c in range(3):
                w[r, c] = w[r, c] + dt / 6.0 * (k1[r, c] + 2.0 * k2[r, c] + 2.0 * k3[r, c] + k4[r, c])
        if not (math.isfinite(state[0]) and math.isfinite(state[1]) and math.isfinite(state[2])):
            return False
    return True


def integrate_ode(u0, p: Params, dt: float, t_end: float) -> OdeRun:
    """Integrate the model with classical RK4, recording every step."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if t_end < dt:
        raise ValueError("t_end must be >= dt")
    u0 = np.asarray(u0, dtype=float)
    nsteps = _n_steps(t_end, dt)
    out = np.empty((nsteps + 1, 3))
    bad = _rk4_traj(p.a, p.alpha, u0[0], u0[1], u0[2], dt, nsteps, out)
    if bad >= 0:
        raise BlowUpError("ode state", time=bad * dt, step=int(bad))
    t = np.arange(nsteps + 1) * dt
    return OdeRun(t=t, states=out, dt=dt)


def _gram_schmidt(w: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt in place; returns the three column norms."""
    norms = np.empty(3)
    for j in range(3):
        v = w[:, j].copy()
        for i in range(j):
            v -= (w[:, i] @ v) * w[:, i]
        norms[j] = np.linalg.norm(v)
        if norms[j] == 0.0:
            raise BlowUpError("tangent vector collapsed to zero")
        w[:, j] = v / norms[j]
    return norms


def lyapunov_spectrum(
    u0,
    p: Params,
    dt: float,
    t_end: float,
    *,
    transient: float = 100.0,
    renorm_interval: float = 1.0,
) -> LyapunovSpectrum:
    """Lyapunov exponents of the model by tangent-space propagation.

    The state and three tangent vectors are advanced jointly with RK4
    (the tangent dynamics use the closed-form Jacobian), re-orthonormalized
    by modified Gram-Schmidt every ``renorm_interval`` time units, and the
    log stretch factors are averaged after discarding ``transient`` time
    units.  Convergence to ~1e-2 needs t_end in the thousands.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if t_end <= transient:
        raise ValueError("t_end must exceed the transient")
    state = np.asarray(u0, dtype=float).copy()
    w = np.eye(3)
    block = max(1, int(round(renorm_interval / dt)))
    block_time = block * dt
    n_transient = int(round(transient / block_time))
    n_avg = max(1, _n_steps(t_end - transient, block_time))

    for i in range(n_transient):
        if not _rk4_tangent_chunk(p.a, p.alpha, state, w, dt, block):
            raise BlowUpError("ode state", time=(i + 1) * block_time)
        _gram_schmidt(w)

    sums = np.zeros(3)
    for i in range(n_avg):
        if not _rk4_tangent_chunk(p.a, p.alpha, state, w, dt, block):
            raise BlowUpError("ode state", time=transient + (i + 1) * block_time)
        sums += np.log(_gram_schmidt(w))

    exponents = np.sort(sums / (n_avg * block_time))[::-1]
    return LyapunovSpectrum(exponents=exponents, horizon=transient + n_avg * block_time)


def benettin_spectrum(
    rhs,
    jac,
    u0,
    dt: float,
    t_end: float,
    *,
    transient: float = 0.0,
    renorm_interval: float = 1.0,
    dim: int | None = None,
) -> LyapunovSpectrum:
    """Generic tangent-propagation Lyapunov estimator for any smooth system.

    ``rhs(u) -> du/dt`` and ``jac(u) -> Jacobian``; used for cross-checks
    against systems whose exponents are known in closed form.
    """
    state = np.asarray(u0, dtype=float).copy()
    n = dim or state.size
    w = np.eye(n)
    block = max(1, int(round(renorm_interval / dt)))
    block_time = block * dt
    n_transient = int(round(transient / block_time))
    n_avg = max(1, _n_steps(t_end - transient, block_time))

    def step(u, w):
        h = dt / 2.0
        k1, m1 = rhs(u), jac(u) @ w
        u2 = u + h * k1
        k2, m2 = rhs(u2), jac(u2) @ (w + h * m1)
        u3 = u + h * k2
        k3, m3 = rhs(u3), jac(u3) @ (w + h * m2)
        u4 = u + dt * k3
        k4, m4 = rhs(u4), jac(u4) @ (w + dt * m3)
        return (
            u + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4),
            w + dt / 6.0 * (m1 + 2 * m2 + 2 * m3 + m4),
        )

    sums = np.zeros(n)
    for i in range(n_transient + n_avg):
        for _ in range(block):
            state, w = step(state, w)
        if not np.all(np.isfinite(state)):
            raise BlowUpError("ode state", time=(i + 1) * block_time)
        norms = np.empty(n)
        for j in range(n):
            v = w[:, j].copy()
            for l in range(j):
                v -= (w[:, l] @ v) * w[:, l]
            norms[j] = np.linalg.norm(v)
            w[:, j] = v / norms[j]
        if i >= n_transient:
            sums += np.log(norms)

    exponents = np.sort(sums / (n_avg * block_time))[::-1]
    return LyapunovSpectrum(exponents=exponents, horizon=(n_transient + n_avg) * block_time)


def ensemble_volume(
    u0,
    p: Params,
    edge: float = 1e-4,
    dt: float = 1e-3,
    t_end: float = 2.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Volume of an advected infinitesimal parallelepiped.

    The base corner u0 and the three corners u0 + edge*e_i are advected with
    RK4; the volume at each step is |det| of the three edge-difference
    vectors.  Under the flow it should follow edge^3 * exp(divergence * t).
    """
    if edge <= 0:
        raise ValueError("edge must be > 0")
    u0 = np.asarray(u0, dtype=float)
    runs = [integrate_ode(u0, p, dt, t_end)]
    for j in range(3):
        corner = u0.copy()
        corner[j] += edge
        runs.append(integrate_ode(corner, p, dt, t_end))
    base = runs[0].states
    edges = np.stack([r.states - base for r in runs[1:]], axis=2)
    vol = np.abs(np.linalg.det(edges))
    return runs[0].t, vol
