"""Figure builders: time series, phase portraits, and space-time surfaces."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import PlotInputError, read_columns, read_run

COMPONENTS = ("u1", "u2", "u3")


def plot_states(states_csv, out_path) -> str:
    """Three stacked time-series panels from a states.csv file."""
    cols = read_columns(states_csv, ("t",) + COMPONENTS)
    fig, axes = plt.subplots(3, 1, sharex=True, figsize=(8, 6))
    for ax, name in zip(axes, COMPONENTS):
        ax.plot(cols["t"], cols[name], lw=0.6)
        ax.set_ylabel(name)
        ax.grid(alpha=0.3)
    axes[-1].set_xlabel("t")
    caption = f"states over t in [{cols['t'][0]:g}, {cols['t'][-1]:g}]"
    fig.suptitle(caption)
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
    return caption


def plot_phase(states_csv, out_path) -> str:
    """3-D phase portrait plus the three coordinate-plane projections."""
    cols = read_columns(states_csv, ("t",) + COMPONENTS)
    u1, u2, u3 = (cols[c] for c in COMPONENTS)
    single_point = len(u1) == 1 or (np.ptp(u1) == 0 and np.ptp(u2) == 0 and np.ptp(u3) == 0)

    fig = plt.figure(figsize=(9, 7))
    ax = fig.add_subplot(2, 2, 1, projection="3d")
    style = {"lw": 0.4} if not single_point else {"marker": "o"}
    ax.plot(u1, u2, u3, **style)
    ax.set_xlabel("u1"), ax.set_ylabel("u2"), ax.set_zlabel("u3")
    for pos, (a, b, na, nb) in enumerate(
        [(u1, u2, "u1", "u2"), (u1, u3, "u1", "u3"), (u2, u3, "u2", "u3")], start=2
    ):
        axp = fig.add_subplot(2, 2, pos)
        axp.plot(a, b, **style)
        axp.set_xlabel(na), axp.set_ylabel(nb)
        axp.grid(alpha=0.3)
    caption = "phase portrait" + (" (constant trajectory: single point)" if single_point else "")
    fig.suptitle(caption)
    fig.savefig(out_path, dpi=130)
    plt.close(fig)
    return caption


def _surface(ax, x, times, zmat, label):
    # zmat: (n_times, n_x); degenerate single-time series renders as a line
    if zmat.shape[0] == 1:
        ax.plot(x, zmat[0], lw=0.8)
        ax.set_xlabel("x"), ax.set_ylabel(label)
        ax.set_title(f"{label} (single snapshot, t={times[0]:g})", fontsize=9)
        return
    mesh = ax.pcolormesh(x, times, zmat, shading="auto", cmap="viridis")
    ax.figure.colorbar(mesh, ax=ax, shrink=0.85)
    ax.set_xlabel("x"), ax.set_ylabel("t")
    ax.set_title(label, fontsize=9)


def _field_surface_figure(x, times, stack, title, out_path):
    # stack: (n_times, 3, n_x)
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    for comp, ax in enumerate(axes):
        _surface(ax, x, times, stack[:, comp, :], f"{title} c{comp + 1}")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=130)
    plt.close(fig)


def plot_surfaces(run_dir, out_dir) -> list[str]:
    """Space-time surfaces of master, slave, and error, plus the phase plot
    at the grid node nearest x=5.  Returns the captions of the four images.

    The node choice is nearest-neighbor, not interpolation; the actual
    coordinate is recorded in the caption.
    """
    trace, manifest, snapshots = read_run(run_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    masters = [s for s in snapshots if s["kind"] == "master"]
    slaves = [s for s in snapshots if s["kind"] == "slave"]
    if not masters or not slaves:
        raise PlotInputError("run has no usable master/slave snapshot pairs")
    n_pairs = min(len(masters), len(slaves))
    masters, slaves = masters[:n_pairs], slaves[:n_pairs]

    x = masters[0]["x"]
    times = np.array([s["t"] for s in masters])
    m_stack = np.stack([s["values"] for s in masters])
    s_stack = np.stack([s["values"] for s in slaves])
    e_stack = s_stack - m_stack

    final_err = trace["err_sup"][-1]
    sync_note = ""
    if manifest.get("synchronized") is False:
        sync_note = " [run not synchronized]"
    if manifest.get("completed") is False:
        sync_note += f" [blow-up at t={manifest.get('failed_at')}]"

    captions = []
    for stack, tag in ((m_stack, "master"), (s_stack, "slave"), (e_stack, "error")):
        caption = f"{tag} field over space and time; final err_sup={final_err:.3e}{sync_note}"
        _field_surface_figure(x, times, stack, caption, out_dir / f"surface_{tag}.png")
        captions.append(caption)

    node = int(np.argmin(np.abs(x - 5.0)))
    fig = plt.figure(figsize=(6, 5))
    ax = fig.add_subplot(projection="3d")
    style = {"lw": 0.8} if n_pairs > 1 else {"marker": "o"}
    ax.plot(m_stack[:, 0, node], m_stack[:, 1, node], m_stack[:, 2, node], label="master", **style)
    ax.plot(s_stack[:, 0, node], s_stack[:, 1, node], s_stack[:, 2, node], label="slave", **style)
    ax.set_xlabel("c1"), ax.set_ylabel("c2"), ax.set_zlabel("c3")
    ax.legend()
    caption = (
        f"pointwise phase at x={x[node]:g} (node nearest 5.0); "
        f"final err_sup={final_err:.3e}{sync_note}"
    )
    fig.suptitle(caption, fontsize=9)
    fig.savefig(out_dir / "phase_x5.png", dpi=130)
    plt.close(fig)
    captions.append(caption)
    return captions
