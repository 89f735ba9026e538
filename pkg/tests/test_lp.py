import numpy as np
import pytest

from spotcheck import EconParams, build_model, optimal_rsus, ta_workload
from spotcheck.lp import LinearProgram, LpStatus, build_rsus_lp, solve
from spotcheck.mechanisms import rsus_recursion


class TestToyPrograms:
    def test_single_binding(self):
        sol = solve(LinearProgram([1.0], [[1.0]], [0.3], 0.0, 1.0))
        assert sol.status == LpStatus.OPTIMAL
        assert sol.x[0] == pytest.approx(0.3, abs=1e-12)
        assert sol.duals[0] == pytest.approx(1.0, abs=1e-12)

    def test_infeasible(self):
        sol = solve(LinearProgram([1.0], [[1.0]], [2.0], 0.0, 1.0))
        assert sol.status == LpStatus.INFEASIBLE

    def test_two_variables(self):
        # min x + 2y, x + y >= 1, x - y >= -0.5
        sol = solve(LinearProgram([1.0, 2.0], [[1, 1], [1, -1]], [1.0, -0.5], 0.0, 1.0))
        np.testing.assert_allclose(sol.x, [1.0, 0.0], atol=1e-12)

    def test_nonzero_lower_bound(self):
        sol = solve(LinearProgram([1.0, 1.0], np.zeros((0, 2)), [], [0.2, -1.0], [1.0, 3.0]))
        np.testing.assert_allclose(sol.x, [0.2, -1.0], atol=1e-12)

    def test_maximize_via_negation(self):
        sol = solve(LinearProgram([-1.0, -1.0], [[-1.0, -2.0]], [-2.0], 0.0, 5.0))
        assert sol.objective_value == pytest.approx(-2.0, abs=1e-12)

    def test_degenerate_redundant_rows(self):
        A = [[1, 1], [1, 1], [2, 2], [1, 0]]
        sol = solve(LinearProgram([1.0, 1.0], A, [1, 1, 2, 0], 0.0, 1.0))
        assert sol.objective_value == pytest.approx(1.0, abs=1e-12)

    def test_bad_shapes(self):
        with pytest.raises(ValueError):
            LinearProgram([1.0, 1.0], [[1.0, 1.0]], [1.0, 2.0], 0.0, 1.0)
        with pytest.raises(ValueError):
            LinearProgram([1.0], [[1.0]], [1.0], 1.0, 0.0)


class TestRsusProgram:
    def test_shape(self, base_model, base_econ):
        lp = build_rsus_lp(base_model, base_econ, 3)
        assert lp.n_vars == 4 and lp.n_constraints == 6

    def test_ros_vector_feasible(self, base_model, base_econ):
        lp = build_rsus_lp(base_model, base_econ, 3)
        slack = lp.slack(np.full(4, 0.5))
        assert np.all(slack >= -1e-12)
        # -P_ab x + P_bb x = 0.04 exactly at x = 0.5
        np.testing.assert_allclose(slack[0::2], 0.0, atol=1e-12)
        np.testing.assert_allclose(slack[1::2], 0.28 - 0.04, atol=1e-12)

    def test_symmetric_constant_tight(self):
        m = build_model(0.5, 0.9, 0.9)
        econ = EconParams(1.0, 25.0)
        x_star = econ.ratio / (m.P_bb - m.P_ab)
        lp = build_rsus_lp(m, econ, 4)
        np.testing.assert_allclose(lp.slack(np.full(5, x_star)), 0.0, atol=1e-12)

    def test_base_matches_recursion(self, base_model, base_econ):
        sol = solve(build_rsus_lp(base_model, base_econ, 3))
        np.testing.assert_allclose(sol.x, rsus_recursion(base_model, base_econ, 3), atol=1e-8)
        mech = optimal_rsus(base_model, base_econ, 3)
        assert sol.objective_value == pytest.approx(ta_workload(base_model, mech).workload, abs=1e-8)

    def test_random_sweep(self):
        rng = np.random.default_rng(20240611)
        done = 0
        while done < 100:
            m = build_model(rng.uniform(0.05, 0.95), rng.uniform(0.6, 0.99), rng.uniform(0.6, 0.99))
            n = int(rng.integers(1, 9))
            if m.P_bb - m.P_ab < 1e-3:
                continue
            g = rng.uniform(0.05, 0.95) * (m.P_bb - m.P_ab)
            econ = EconParams(1.0, 1.0 / g)
            mech = optimal_rsus(m, econ, n)
            if not mech:
                continue
            lp = build_rsus_lp(m, econ, n)
            sol = solve(lp)
            assert sol.status == LpStatus.OPTIMAL
            np.testing.assert_allclose(sol.x, mech.rsus_vector, atol=1e-8)
            assert sol.objective_value == pytest.approx(ta_workload(m, mech).workload, abs=1e-8)
            # binding set: every lazy-B row, and the lazy-A row at k = n-1
            slack = lp.slack(sol.x)
            np.testing.assert_allclose(slack[0::2], 0.0, atol=1e-8)
            assert abs(slack[2 * n - 1]) <= 1e-8
            for key in ("primal_residual", "dual_residual", "complementary_slackness"):
                assert sol.diagnostics[key] <= 1e-8
            done += 1
