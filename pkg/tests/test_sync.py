import math

import numpy as np
import pytest

import leipnik as lp
from leipnik.config import build_scenario
from leipnik.linalg3 import det3, hurwitz_certificate, trace3
from leipnik.model import Params, reaction_rhs
from leipnik.pde import Field3, Grid1D, StepperConfig
from leipnik.sync import (
    check_condition_313,
    control_phi,
    error_matrix,
    error_rhs,
    lyapunov_decomposition,
    lyapunov_functional,
    mode_matrix,
    run_master_slave,
)


@pytest.fixture()
def sync_scenario():
    return build_scenario([{"preset": "paper-sync"}])


class TestControlPhi:
    def test_zero_error(self):
        u = np.array([0.3, -0.1, 0.2])
        assert np.array_equal(control_phi(u, u, Params(k=2.0)), np.zeros(3))

    def test_direct_substitution(self):
        phi = control_phi([1.0, 2.0, 3.0], [2.0, 3.0, 4.0], Params(k=1.0))
        assert np.allclose(phi, [-20.0, -45.0, -1.175], atol=1e-15)

    def test_closure_identity(self):
        p = Params(k=3.0)
        rng = np.random.default_rng(43)
        for _ in range(1000):
            u, v = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
            lhs = reaction_rhs(v, p) - reaction_rhs(u, p) + control_phi(u, v, p)
            rhs = error_matrix(u, v, p) @ (v - u)
            scale = max(1.0, np.max(np.abs(lhs)))
            assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


class TestErrorRhs:
    def test_zero_error(self):
        u = np.array([0.5, 0.1, -0.2])
        assert np.array_equal(error_rhs(u, u, Params()), np.zeros(3))

    def test_definitional_identity(self):
        p = Params(k=0.7)
        rng = np.random.default_rng(47)
        for _ in range(300):
            u, v = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
            direct = error_rhs(u, v, p)
            built = reaction_rhs(v, p) - reaction_rhs(u, p) + control_phi(u, v, p)
            assert np.max(np.abs(direct - built)) < 1e-13

    def test_matrix_reduction(self):
        p = Params(k=2.5)
        rng = np.random.default_rng(53)
        for _ in range(1000):
            u, v = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
            lhs = error_rhs(u, v, p)
            rhs = error_matrix(u, v, p) @ (v - u)
            assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(lhs)))


class TestErrorMatrix:
    def test_at_origin(self):
        a = error_matrix(np.zeros(3), np.zeros(3), Params(k=1.0))
        assert np.array_equal(a, [[-0.4, 1, 0], [-1, -0.4, 0], [0, 0, -1.0]])

    def test_symmetric_part_is_diagonal(self):
        rng = np.random.default_rng(59)
        for _ in range(100):
            u, v = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
            p = Params(k=rng.uniform(0, 10))
            s = error_matrix(u, v, p) + error_matrix(u, v, p).T
            assert np.array_equal(s, np.diag([-0.8, -0.8, -2 * p.k]))

    def test_quadratic_form(self):
        rng = np.random.default_rng(61)
        p = Params(k=4.0)
        for _ in range(1000):
            u, v = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
            e = rng.uniform(-1, 1, 3)
            q = e @ (error_matrix(u, v, p) @ e)
            explicit = -0.4 * e[0] ** 2 - 0.4 * e[1] ** 2 - p.k * e[2] ** 2
            assert q == pytest.approx(explicit, rel=1e-12, abs=1e-13)

    def test_large_gain_certificate(self):
        st = np.array([0.349, 0.0, -0.3])
        assert hurwitz_certificate(error_matrix(st, st, Params(k=50.0))).stable


class TestModeMatrix:
    def test_mode_zero_drops_diffusion(self):
        g = Grid1D(10.0, 201)
        u = np.array([0.2, -0.3, 0.1])
        p = Params(k=2.0)
        m0 = mode_matrix(0, u, g, p)
        expect = np.array(
            [
                [-0.4, 1 + 10 * u[2], 5 * u[1]],
                [-1 - 10 * u[2], -0.4, 5 * u[0]],
                [-5 * u[1], -5 * u[0], -2.0],
            ]
        )
        assert np.array_equal(m0, expect)

    def test_trace_identity(self):
        g = Grid1D(10.0, 201)
        p = Params(k=3.0, d1=0.2, d2=0.3, d3=0.4)
        rng = np.random.default_rng(67)
        for i in (0, 1, 5, 17):
            u = rng.uniform(-1, 1, 3)
            lam = lp.neumann_eigenvalue(i, g)
            assert trace3(mode_matrix(i, u, g, p)) == pytest.approx(
                -(p.d1 + p.d2 + p.d3) * lam + trace3(mode_matrix(0, u, g, p)), rel=1e-14
            )

    def test_determinant_cubic_expansion(self):
        # det A_i as an explicit cubic in the mode eigenvalue
        g = Grid1D(10.0, 201)
        rng = np.random.default_rng(71)
        for _ in range(50):
            u1, u2, u3 = rng.uniform(-1, 1, 3)
            p = Params(
                k=rng.uniform(0, 5),
                d1=rng.uniform(0.05, 1),
                d2=rng.uniform(0.05, 1),
                d3=rng.uniform(0.05, 1),
            )
            i = rng.integers(0, 12)
            lam = lp.neumann_eigenvalue(int(i), g)
            det_j = det3(mode_matrix(0, (u1, u2, u3), g, p))
            poly = (
                -(p.d1 * p.d2 * p.d3) * lam**3
                - (0.4 * p.d1 * p.d3 + 0.4 * p.d2 * p.d3 + p.k * p.d1 * p.d2) * lam**2
                - (
                    25 * p.d1 * u1**2
                    + 25 * p.d2 * u2**2
                    + 100 * p.d3 * u3**2
                    + 20 * p.d3 * u3
                    + 1.16 * p.d3
                    + 0.4 * p.k * p.d1
                    + 0.4 * p.k * p.d2
                )
                * lam
                + det_j
            )
            got = det3(mode_matrix(int(i), (u1, u2, u3), g, p))
            assert got == pytest.approx(poly, rel=1e-10, abs=1e-12)


class TestCondition313:
    def test_zero_bound_zero_gain(self):
        g = Grid1D(10.0, 201)
        lam1 = lp.neumann_eigenvalue(1, g)
        p = Params(k=0.0, d3=1.0 / lam1)
        rep = check_condition_313(0.0, g, p)
        assert rep.lhs == pytest.approx(0.325, abs=1e-12)
        assert rep.rhs == pytest.approx(1.0, rel=1e-12)
        assert rep.satisfied

    def test_k_min_closed_form(self):
        g = Grid1D(10.0, 201)
        rep = check_condition_313(0.4, g, Params(d3=0.1))
        closed = (24.52 / (0.1 * (math.pi / 10.0) ** 2) - 1.6) / 2.0
        assert rep.k_min == pytest.approx(closed, rel=1e-3)

    def test_k_min_resubstitution(self):
        g = Grid1D(10.0, 201)
        rep = check_condition_313(0.4, g, Params(d3=0.1))
        above = check_condition_313(0.4, g, Params(k=rep.k_min * 1.001, d3=0.1))
        below = check_condition_313(0.4, g, Params(k=rep.k_min * 0.999, d3=0.1))
        assert above.satisfied
        assert not below.satisfied

    def test_lhs_monotone_in_bound(self):
        g = Grid1D(10.0, 201)
        p = Params(k=1.0)
        lhs = [check_condition_313(s, g, p).lhs for s in np.linspace(0, 1, 20)]
        assert all(b >= a for a, b in zip(lhs, lhs[1:]))

    def test_rejects_negative_bound(self):
        with pytest.raises(ValueError):
            check_condition_313(-0.1, Grid1D(10.0, 11), Params())


class TestLyapunovFunctional:
    def test_zero_field(self):
        g = Grid1D(10.0, 101)
        assert lyapunov_functional(Field3.constant(g, [0, 0, 0])) == 0.0

    def test_unit_first_component(self):
        g = Grid1D(10.0, 101)
        e = Field3.from_components(g, np.ones(g.n), np.zeros(g.n), np.zeros(g.n))
        assert lyapunov_functional(e) == pytest.approx(5.0, rel=1e-12)

    def test_quadrature_refinement(self):
        # e1 = x so the integrand x^2 has nonzero curvature: the trapezoid
        # error is exactly proportional to dx^2
        def value(n):
            g = Grid1D(10.0, n)
            e = Field3.from_components(g, g.x, np.zeros(g.n), np.zeros(g.n))
            return lyapunov_functional(e)

        exact = 500.0 / 3.0  # (1/2) * integral of x^2 over [0, 10]
        e1, e2 = abs(value(51) - exact), abs(value(101) - exact)
        assert 3.5 < e1 / e2 < 4.5  # second-order quadrature halves dx -> ~4x


class TestLyapunovDecomposition:
    def test_zero_field(self):
        g = Grid1D(10.0, 101)
        z = Field3.constant(g, [0, 0, 0])
        assert lyapunov_decomposition(z, z, Params()) == (0.0, 0.0)

    def test_both_terms_nonpositive(self):
        g = Grid1D(10.0, 101)
        rng = np.random.default_rng(73)
        p = Params(k=2.0)
        u = Field3.constant(g, [0, 0, 0])
        for _ in range(200):
            e = Field3(g, rng.standard_normal((3, g.n)))
            i_term, j_term = lyapunov_decomposition(u, e, p)
            assert i_term <= 0.0
            assert j_term <= 0.0

    def test_matches_dv_dt_along_run(self, sync_scenario):
        scn = sync_scenario
        res = run_master_slave(
            scn.master_ic.field(scn.grid),
            scn.slave_ic.field(scn.grid),
            scn.params,
            scn.stepper,
            2.0,
            snapshot_count=0,
        )
        tr = res.trace
        dvdt = np.gradient(tr.V, tr.t)
        pred = tr.I_term + tr.J_term
        sel = tr.V > 1e-6 * tr.V[0]
        rel = np.abs(dvdt[sel] - pred[sel]) / np.abs(pred[sel])
        assert np.max(rel) < 0.05

    def test_grid_mismatch_rejected(self):
        a = Field3.constant(Grid1D(10.0, 11), [0, 0, 0])
        b = Field3.constant(Grid1D(10.0, 21), [0, 0, 0])
        with pytest.raises(ValueError):
            lyapunov_decomposition(a, b, Params())


class TestRunMasterSlave:
    def test_identical_ics_stay_synchronized(self, sync_scenario):
        scn = sync_scenario
        ic = scn.master_ic.field(scn.grid)
        res = run_master_slave(ic, ic.copy(), scn.params, scn.stepper, 1.0, snapshot_count=3)
        assert np.max(res.trace.err_sup) <= 1e-10
        assert res.synchronized

    def test_v_monotone_for_small_gains(self, sync_scenario):
        scn = sync_scenario
        for k in (0.05, 0.5, 5.0):
            p = Params(k=k)
            res = run_master_slave(
                scn.master_ic.field(scn.grid),
                scn.slave_ic.field(scn.grid),
                p,
                scn.stepper,
                2.0,
                snapshot_count=0,
            )
            dv = np.diff(res.trace.V)
            assert dv.max() <= 1e-9 * res.trace.V[0]

    def test_decay_rate_bound_small_gain(self, sync_scenario):
        scn = sync_scenario
        p = Params(k=0.2)
        res = run_master_slave(
            scn.master_ic.field(scn.grid),
            scn.slave_ic.field(scn.grid),
            p,
            scn.stepper,
            10.0,
            snapshot_count=0,
        )
        tr = res.trace
        half = len(tr.t) // 2
        rate = -np.polyfit(tr.t[:half], np.log(tr.V[:half]), 1)[0]
        assert rate >= 2 * min(0.4, p.k) - 0.05

    def test_controls_off_chaotic_divergence(self, sync_scenario):
        scn = sync_scenario
        g = Grid1D(10.0, 51)
        master = scn.master_ic.field(g)
        slave = master.copy()
        slave.values[0] += 1e-6
        res = run_master_slave(
            master, slave, scn.params, StepperConfig(dt=1e-3), 20.0, controls_on=False, snapshot_count=0
        )
        assert res.trace.err_sup[-1] > 5 * res.trace.err_sup[0]

    def test_snapshot_cadence(self, sync_scenario):
        scn = sync_scenario
        ic = scn.master_ic.field(scn.grid)
        res = run_master_slave(ic, ic.copy(), scn.params, scn.stepper, 0.02, snapshot_count=5)
        assert len(res.snapshots) == 5
        times = [t for t, _, _ in res.snapshots]
        assert times[0] == 0.0
        assert times == sorted(times)

    def test_blowup_reported_not_raised(self, sync_scenario):
        scn = sync_scenario
        g = Grid1D(10.0, 51)
        res = run_master_slave(
            scn.master_ic.field(g),
            scn.slave_ic.field(g),
            scn.params,
            StepperConfig(dt=5.0),
            500.0,
            snapshot_count=0,
        )
        assert not res.completed
        assert res.failure_time is not None
        assert not res.synchronized

    def test_condition_implies_mode_certificates(self, sync_scenario):
        # At a gain beyond k_min for the observed |u3| bound, the gain
        # condition holds and every sampled mode matrix certifies stable.
        scn = sync_scenario
        p = Params(k=2000.0)
        cfg = StepperConfig(dt=5e-4)
        res = run_master_slave(
            scn.master_ic.field(scn.grid),
            scn.slave_ic.field(scn.grid),
            p,
            cfg,
            2.0,
            snapshot_count=9,
        )
        assert res.completed
        rep = check_condition_313(res.u3_sup_observed, scn.grid, p)
        assert rep.satisfied  # premise of the implication
        for _, master, _ in res.snapshots:
            for node in range(0, scn.grid.n, 40):
                state = master.values[:, node]
                for i in range(0, 65, 8):
                    cert = hurwitz_certificate(mode_matrix(i, state, scn.grid, p))
                    assert cert.stable
