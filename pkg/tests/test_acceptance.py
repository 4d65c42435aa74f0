"""Acceptance suite: one test per criterion, each at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v`; a PASS/FAIL line per
criterion is printed in the terminal summary (see conftest).
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

import leipnik as lp
from leipnik.cli import main as cli_main
from leipnik.config import build_scenario
from leipnik.linalg3 import hurwitz_certificate
from leipnik.model import reaction_rhs
from leipnik.pde import Field3, Grid1D, StepperConfig, imex_step, trapezoid_weights
from leipnik.sync import check_condition_313, mode_matrix, run_master_slave
from tests.conftest import CATALOG_EIGS, CATALOG_POINTS

IC = np.array([0.349, 0.0, -0.3])


def test_equilibria_catalog(paper_params):
    """Five roots, the origin exactly, the others within 1e-4; under 1 s."""
    t0 = time.perf_counter()
    reports = lp.find_equilibria(paper_params)
    elapsed = time.perf_counter() - t0

    assert len(reports) == 5
    pts = np.array([r.point for r in reports])
    origin_row = np.argmin(np.linalg.norm(pts, axis=1))
    assert np.array_equal(pts[origin_row], np.zeros(3))
    for target in CATALOG_POINTS:
        assert np.min(np.max(np.abs(pts - target), axis=1)) < 1e-4
    assert elapsed < 1.0
    print(f"equilibria: 5 roots, origin exact, catalog within 1e-4, {elapsed:.3f}s")


def test_eigenvalue_table(equilibria):
    """Jacobian spectra at the recomputed equilibria match the table to 1e-3."""
    t0 = time.perf_counter()
    for target_pt, target_eigs in zip(CATALOG_POINTS, CATALOG_EIGS):
        rep = min(equilibria, key=lambda r: np.linalg.norm(r.point - target_pt))
        got = sorted(rep.eigenvalues, key=lambda z: (z.real, z.imag))
        want = sorted(np.array(target_eigs, dtype=complex), key=lambda z: (z.real, z.imag))
        for g, w in zip(got, want):
            assert abs(g - w) < 1e-3
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    print(f"eigenvalue table matched within 1e-3 in {elapsed:.3f}s")


def test_lyapunov_spectrum(paper_params):
    """Exponents (0.1302, 0, -0.7537) within 0.02 each; sum -0.625 within 0.02."""
    spec = lp.lyapunov_spectrum(IC, paper_params, 1e-3, 5000.0)
    target = np.array([0.1302, 0.0, -0.7537])
    diffs = np.abs(spec.exponents - target)
    assert np.all(diffs < 0.02), f"exponents {spec.exponents} vs {target}"
    assert abs(spec.exponents.sum() - (-0.625)) < 0.02
    print(f"lyapunov exponents {np.round(spec.exponents, 4)} (targets {target}, tol 0.02)")


def test_dissipativity(paper_params):
    """Advected-volume log-slope over [0, 2] equals -0.625 within 10%."""
    t, vol = lp.ensemble_volume(IC, paper_params, edge=1e-4, dt=1e-3, t_end=2.0)
    slope = np.polyfit(t, np.log(vol), 1)[0]
    assert abs(slope - (-0.625)) < 0.0625
    print(f"volume log-slope {slope:.5f} vs -0.625 (tol 10%)")


def test_controller_closure():
    """f(v) - f(u) + phi(u, v) == A(u, v)(v - u) to 1e-12 relative, 1e4 pairs."""
    p = lp.Params(k=2.0)
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(10000):
        u, v = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
        lhs = reaction_rhs(v, p) - reaction_rhs(u, p) + lp.control_phi(u, v, p)
        rhs = lp.error_matrix(u, v, p) @ (v - u)
        scale = max(1.0, float(np.max(np.abs(lhs))), float(np.max(np.abs(rhs))))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
    assert worst <= 1e-12
    print(f"closure identity worst relative error {worst:.2e} over 1e4 pairs")


@pytest.fixture(scope="module")
def flagship_sync_run():
    scn = build_scenario([{"preset": "paper-sync"}])
    t0 = time.perf_counter()
    res = run_master_slave(
        scn.master_ic.field(scn.grid),
        scn.slave_ic.field(scn.grid),
        scn.params,
        scn.stepper,
        scn.t_end,
        snapshot_count=10,
    )
    return res, time.perf_counter() - t0


def test_global_synchronization(flagship_sync_run):
    """Cosine-modulated ICs, L=10, n=201, dt=1e-3, d=0.1, k=5:
    (a) V nonincreasing each step, (b) fitted decay >= 0.75, (c) err < 1e-3 by t=40."""
    res, elapsed = flagship_sync_run
    tr = res.trace
    assert res.completed

    dv = np.diff(tr.V)
    assert dv.max() <= 1e-9 * tr.V[0], f"V increased by {dv.max()}"

    half = len(tr.t) // 2
    rate = -np.polyfit(tr.t[:half], np.log(tr.V[:half]), 1)[0]
    assert rate >= 2 * min(0.4, 5.0) - 0.05

    assert tr.err_sup[-1] < 1e-3
    reached = tr.t[np.argmax(tr.err_sup < 1e-3)]
    assert reached <= 40.0
    assert elapsed < 120.0
    print(
        f"sync: V monotone, decay rate {rate:.3f} (>=0.75), err<1e-3 at t={reached:.1f}, "
        f"run {elapsed:.0f}s"
    )


def test_condition_gain_consistency():
    """Gain condition satisfied at the observed |u3| bound => every sampled
    mode certificate stable; k_min closed form reproduced to 0.1%."""
    grid = Grid1D(10.0, 201)
    rep = check_condition_313(0.4, grid, lp.Params(d3=0.1))
    closed = (24.52 / (0.1 * (math.pi / 10.0) ** 2) - 1.6) / 2.0
    assert abs(rep.k_min - closed) <= 1e-3 * closed

    scn = build_scenario([{"preset": "paper-sync"}])
    p = lp.Params(k=2000.0)
    res = run_master_slave(
        scn.master_ic.field(scn.grid),
        scn.slave_ic.field(scn.grid),
        p,
        StepperConfig(dt=5e-4),
        2.0,
        snapshot_count=9,
    )
    assert res.completed
    cond = check_condition_313(res.u3_sup_observed, scn.grid, p)
    assert cond.satisfied, "premise: condition should hold at this gain"
    checked = 0
    for _, master, _ in res.snapshots:
        for node in range(0, scn.grid.n, 25):
            state = master.values[:, node]
            for i in range(0, 65, 4):
                assert hurwitz_certificate(mode_matrix(i, state, scn.grid, p)).stable
                checked += 1
    print(
        f"gain condition: k_min {rep.k_min:.1f} (closed form {closed:.1f}), "
        f"{checked} mode certificates all stable at sup|u3|={res.u3_sup_observed:.3f}"
    )


def test_solver_orders(paper_params):
    """RK4 observed order >= 3.5; spatial order ~2; mass conserved to 1e-12/step."""
    ref = lp.integrate_ode(IC, paper_params, 2.5e-4, 10.0).states[-1]
    errs = [
        np.max(np.abs(lp.integrate_ode(IC, paper_params, dt, 10.0).states[-1] - ref))
        for dt in (4e-3, 2e-3, 1e-3)
    ]
    rk4_order = min(np.log2(errs[i] / errs[i + 1]) for i in range(2))
    assert rk4_order >= 3.5

    def mode_error(n):
        g = Grid1D(10.0, n)
        cfg = StepperConfig(dt=1e-3)
        state = Field3.from_components(g, np.cos(np.pi * g.x / 10.0), np.zeros(g.n), np.zeros(g.n))
        for _ in range(int(10.0 / cfg.dt)):
            state = imex_step(state, lambda v: np.zeros_like(v), (0.1, 0.1, 0.1), cfg)
        exact = math.exp(-0.1 * (math.pi / 10.0) ** 2 * 10.0) * np.cos(np.pi * g.x / 10.0)
        return np.max(np.abs(state.c1 - exact))

    space_order = math.log2(mode_error(101) / mode_error(201))
    assert 1.8 < space_order < 2.2

    g = Grid1D(10.0, 201)
    w = trapezoid_weights(g)
    rng = np.random.default_rng(103)
    state = Field3(g, rng.standard_normal((3, g.n)))
    cfg = StepperConfig(dt=1e-2)
    prev = state.values @ w
    worst_drift = 0.0
    for _ in range(200):
        state = imex_step(state, lambda v: np.zeros_like(v), (0.1, 0.1, 0.1), cfg)
        cur = state.values @ w
        worst_drift = max(worst_drift, float(np.max(np.abs(cur - prev))))
        prev = cur
    assert worst_drift < 1e-12
    print(
        f"orders: RK4 {rk4_order:.2f} (>=3.5), spatial {space_order:.2f} (~2), "
        f"worst mass drift {worst_drift:.1e}/step"
    )


def test_determinism(tmp_path, capsys):
    """Two runs of each preset produce byte-identical CSV/JSON outputs
    (manifest compared with its wall-clock timestamps stripped)."""

    def run_all(root: Path):
        root.mkdir()
        assert cli_main(["equilibria", "--out", str(root / "eq")]) == 0
        assert cli_main(["ode", "--preset", "paper-ode", "--t-end", "2", "--out", str(root / "ode")]) == 0
        assert (
            cli_main(
                ["sync", "--preset", "paper-sync", "--t-end", "1", "--snapshots", "4",
                 "--out", str(root / "sync")]
            )
            == 0
        )
        assert cli_main(["stability-check", "--u3-sup", "0.4", "--out", str(root / "stab")]) == 0

    run_all(tmp_path / "one")
    run_all(tmp_path / "two")
    capsys.readouterr()

    compared = 0
    for f1 in sorted((tmp_path / "one").rglob("*")):
        if not f1.is_file() or f1.name == ".lock":
            continue
        f2 = tmp_path / "two" / f1.relative_to(tmp_path / "one")
        assert f2.exists(), f"missing {f2}"
        if f1.name == "manifest.json":
            m1, m2 = json.loads(f1.read_text()), json.loads(f2.read_text())
            for m in (m1, m2):
                m.pop("started_at"), m.pop("finished_at")
            assert m1 == m2, f"manifest mismatch in {f1}"
        else:
            assert f1.read_bytes() == f2.read_bytes(), f"byte mismatch in {f1}"
        compared += 1
    assert compared > 10
    print(f"determinism: {compared} files byte-identical across reruns")
