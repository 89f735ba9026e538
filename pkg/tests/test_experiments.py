import numpy as np
import pytest

from spotcheck import EconParams, build_model, compare_mechanisms
from spotcheck.experiments import (
    N_COLUMNS,
    RC_COLUMNS,
    prior_grid,
    scaled_rss_curve,
    sweep_n,
    sweep_rc,
)


class TestGrid:
    def test_interior(self):
        g = prior_grid(0.25)
        np.testing.assert_allclose(g, [0.25, 0.5, 0.75])

    def test_default_size(self):
        assert len(prior_grid(0.001)) == 999


class TestCurve:
    def test_matches_scalar_path(self):
        priors = np.array([0.1, 0.3, 0.5, 0.62, 0.8, 0.97])
        scaled, ros_thr, rss_thr = scaled_rss_curve(priors, 0.85, 0.85, 4)
        for j, pr in enumerate(priors):
            m = build_model(pr, 0.85, 0.85)
            if m.P_bb - m.P_ab > 0:
                econ = EconParams(1.0, 1.0 / (0.5 * (m.P_bb - m.P_ab)))
                cmp = compare_mechanisms(m, econ, 4)
                assert scaled[j] == pytest.approx(cmp.scaled_rss, abs=1e-12)
            assert ros_thr[j] == pytest.approx(m.P_bb - m.P_ab, abs=1e-12)
            assert rss_thr[j] == pytest.approx(m.P_aa / m.P_a - m.P_a, abs=1e-12)

    def test_uninformative_points_never_feasible(self):
        _, ros_thr, rss_thr = scaled_rss_curve(np.array([0.3, 0.5]), 0.5, 0.5, 3)
        assert np.all(np.isneginf(ros_thr)) and np.all(np.isneginf(rss_thr))


class TestSweepRc:
    def test_columns(self):
        rows = sweep_rc([25.0], [0.9], prior_step=0.01)
        assert tuple(rows[0].as_dict())[:len(RC_COLUMNS)] == RC_COLUMNS

    def test_infeasible_cells(self):
        rows = sweep_rc([1.5], [0.7], prior_step=0.01)
        r = rows[0]
        assert not r.feasible_ros and r.prior_star is None and r.scaled_rss is None and r.reason

    def test_perfect_signals_closed_form(self):
        rcs = [5.0, 20.0, 100.0, 1000.0]
        rows = sweep_rc(rcs, [1.0], prior_step=0.001)
        prev = np.inf
        for rc, r in zip(rcs, rows):
            pi = r.prior_star
            assert r.scaled_rss == pytest.approx(2 * min(pi, 1 - pi), abs=1e-9)
            # optimum sits at the ROS edge 1 - prior = c/R, rounded onto the grid
            assert min(pi, 1 - pi) == pytest.approx(1.0 / rc, abs=0.001 + 1e-12)
            assert r.scaled_rss < prev
            prev = r.scaled_rss
        assert rows[-1].scaled_rss <= 0.0021

    def test_monotone_in_rc_and_accuracy(self):
        rcs = [3.0, 10.0, 30.0, 100.0, 300.0]
        ps = [0.7, 0.8, 0.9, 1.0]
        rows = sweep_rc(rcs, ps, prior_step=0.005)
        table = {(r.r_over_c, r.p_signal): r.scaled_rss for r in rows}
        for p in ps:
            vals = [table[(rc, p)] for rc in rcs if table[(rc, p)] is not None]
            assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
        for rc in rcs:
            vals = [table[(rc, p)] for p in ps if table[(rc, p)] is not None]
            assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


class TestSweepN:
    def test_values(self):
        rows = {r.n: r for r in sweep_n([3, 10, 200])}
        assert rows[3].scaled_rss == pytest.approx(0.36, abs=0.01)
        assert rows[10].scaled_rss == pytest.approx(0.47, abs=0.01)
        assert rows[200].scaled_rss == pytest.approx(0.578, abs=0.005)
        assert tuple(rows[3].as_dict()) == N_COLUMNS

    def test_rsus_between(self):
        for r in sweep_n(range(1, 12)):
            assert r.rss_workload <= r.rsus_workload + 1e-12 <= r.ros_workload + 2e-12
