import math

import numpy as np
import pytest

from zopt.oracle import OracleConfig, oracle_eval, sample_direction
from zopt.problems import Objective, least_squares_from_arrays, make_least_squares
from zopt.sets import Box, gradient_map
from zopt.solvers import (
    DivergenceError,
    RunRecord,
    SolverConfig,
    best_iterate,
    load_run_record,
    projected_random_search,
    random_search,
    save_run_record,
    suggest_params,
    theorem_step_size,
)


def scalar_problem():
    return least_squares_from_arrays(np.array([[1.0]]), np.array([0.0]))


def config(mu=1e-6, seed=123, step=0.025, iters=2000, stride=100, lip=None):
    return SolverConfig(
        oracle=OracleConfig(mu=mu, seed=seed),
        step_size=step,
        num_iters=iters,
        record_stride=stride,
        lip_const=lip,
    )


class TestUnconstrainedRun:
    def test_constant_objective_never_moves(self):
        f = Objective(3, lambda x: 7.5)
        record = random_search(f, np.array([1.0, -2.0, 0.5]), config(iters=50, stride=1))
        for x in record.iterates:
            np.testing.assert_array_equal(x, [1.0, -2.0, 0.5])
        assert np.all(record.values == 7.5)

    def test_scalar_quadratic_seeded_regression(self):
        # analyzed step for n=1, lip=2 is 1/(4*5*2) = 0.025
        problem = scalar_problem()
        record = random_search(problem.objective, np.array([1.0]), config())
        k, x, value = best_iterate(record)
        assert value <= 1e-3
        assert k == 698
        assert value == pytest.approx(1.76326399707493e-21, rel=1e-9)

    def test_runs_are_bit_deterministic(self):
        problem = make_least_squares(3, 8, 0.1, 4)
        x0 = np.random.default_rng(1).standard_normal(8)
        cfg = config(mu=1e-5, seed=77, step=1e-3, iters=300, stride=50)
        a = random_search(problem.objective, x0, cfg)
        b = random_search(problem.objective, x0, cfg)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.iterates, b.iterates)
        assert np.array_equal(a.final_point, b.final_point)

    def test_evaluation_accounting(self):
        calls = []
        problem = scalar_problem()

        def counted(x):
            calls.append(1)
            return problem.objective(x)

        f = Objective(1, counted)
        n_iters = 40
        record = random_search(f, np.array([1.0]), config(iters=n_iters, stride=10))
        assert record.eval_count == 2 * n_iters + 1
        assert len(calls) == record.eval_count

    def test_best_values_nonincreasing(self):
        problem = make_least_squares(4, 9, 0.1, 8)
        x0 = np.random.default_rng(2).standard_normal(9)
        record = random_search(
            problem.objective, x0, config(mu=1e-5, seed=3, step=1e-3, iters=400)
        )
        assert np.all(np.diff(record.best_values) <= 0)
        assert record.best_value == record.values.min()
        assert record.best_k == int(np.argmin(record.values))

    def test_divergence_guard_reports_iteration(self):
        problem = scalar_problem()
        oversized = config(mu=1e-3, seed=5, step=1e9, iters=500, stride=100)
        with pytest.raises(DivergenceError) as err:
            random_search(problem.objective, np.array([1.0]), oversized)
        assert err.value.iteration > 0
        assert err.value.point_norm > 0

    def test_nonfinite_objective_aborts(self):
        f = Objective(1, lambda x: math.nan)
        with pytest.raises(DivergenceError):
            random_search(f, np.array([0.0]), config(iters=5))

    def test_general_correlation_matrix_converges(self):
        problem = scalar_problem()
        cfg = SolverConfig(
            oracle=OracleConfig(mu=1e-6, seed=6, b_matrix=np.array([[4.0]])),
            step_size=0.01,
            num_iters=2000,
            record_stride=500,
        )
        record = random_search(problem.objective, np.array([1.0]), cfg)
        assert record.best_value < 1e-3


class TestProjectedRun:
    def test_matches_unconstrained_when_projection_inactive(self):
        problem = make_least_squares(3, 6, 0.1, 10)
        x0 = np.random.default_rng(3).standard_normal(6)
        cfg = config(mu=1e-5, seed=9, step=1e-3, iters=300, stride=25)
        huge_box = Box(-1e6, 1e6, dim=6)
        plain = random_search(problem.objective, x0, cfg)
        projected = projected_random_search(problem.objective, huge_box, x0, cfg)
        assert np.array_equal(plain.values, projected.values)
        assert np.array_equal(plain.final_point, projected.final_point)

    def test_all_iterates_feasible(self):
        problem = make_least_squares(4, 12, 0.1, 11)
        box = Box(-0.5, 0.5, dim=12)
        x0 = box.project(np.random.default_rng(4).standard_normal(12))
        cfg = config(
            mu=1e-7, seed=13, step=1.0 / problem.lip_const, iters=500, stride=1
        )
        record = projected_random_search(problem.objective, box, x0, cfg)
        assert record.feasibility_violations == 0
        for x in record.iterates:
            assert box.contains(x)

    def test_update_identity_with_gradient_map(self):
        # x_{k+1} must equal x_k - h * s_k where s_k uses the same estimate
        problem = make_least_squares(3, 5, 0.1, 14)
        box = Box(-0.5, 0.5, dim=5)
        x0 = box.project(np.random.default_rng(5).standard_normal(5))
        h = 1.0 / problem.lip_const
        cfg = config(mu=1e-6, seed=21, step=h, iters=60, stride=1)
        record = projected_random_search(problem.objective, box, x0, cfg)
        for idx in range(len(record.iterate_ks) - 1):
            k = int(record.iterate_ks[idx])
            x_k = record.iterates[idx]
            x_next = record.iterates[idx + 1]
            u = sample_direction(cfg.oracle, 5, counter=k)
            g = oracle_eval(problem.objective, x_k, u, cfg.oracle)
            s = gradient_map(box, x_k, g, h)
            drift = np.linalg.norm(x_next - (x_k - h * s))
            assert drift <= 1e-10 * (1 + np.linalg.norm(x_k))

    def test_infeasible_start_rejected(self):
        problem = make_least_squares(2, 4, 0.1, 15)
        box = Box(-0.5, 0.5, dim=4)
        with pytest.raises(ValueError, match="infeasible"):
            projected_random_search(
                problem.objective, box, np.full(4, 2.0), config(iters=10)
            )

    def test_oversized_step_warns(self):
        problem = make_least_squares(2, 4, 0.1, 16)
        box = Box(-0.5, 0.5, dim=4)
        x0 = np.zeros(4)
        cfg = config(
            mu=1e-6, seed=2, step=10.0 / problem.lip_const, iters=5,
            lip=problem.lip_const,
        )
        with pytest.warns(UserWarning, match="step size"):
            projected_random_search(problem.objective, box, x0, cfg)

    def test_decrease_in_expectation_across_seeds(self):
        problem = make_least_squares(5, 20, 0.1, 18)
        h = theorem_step_size("unconstrained", 20, problem.lip_const)
        x0 = np.random.default_rng(6).standard_normal(20)
        finals = []
        starts = []
        for seed in range(25):
            cfg = config(mu=1e-6, seed=seed, step=h, iters=300, stride=300)
            record = random_search(problem.objective, x0, cfg)
            starts.append(record.values[0])
            finals.append(record.values[-1])
        assert np.mean(finals) < np.mean(starts)


class TestBestIterate:
    def make_record(self, values):
        values = np.array(values, dtype=float)
        best = np.minimum.accumulate(values)
        best_k = int(np.argmin(values))
        return RunRecord(
            seed=0,
            config=config(iters=len(values) - 1),
            num_iters=len(values) - 1,
            values=values,
            best_values=best,
            iterate_ks=np.arange(len(values)),
            iterates=np.zeros((len(values), 1)),
            final_point=np.zeros(1),
            best_k=best_k,
            best_point=np.full(1, float(best_k)),
            eval_count=2 * (len(values) - 1) + 1,
        )

    def test_tie_breaks_to_earliest(self):
        record = self.make_record([3.0, 1.0, 1.0, 2.0])
        k, _, value = best_iterate(record)
        assert (k, value) == (1, 1.0)

    def test_single_entry(self):
        k, _, value = best_iterate(self.make_record([4.0]))
        assert (k, value) == (0, 4.0)

    def test_constant_values(self):
        k, _, value = best_iterate(self.make_record([2.0, 2.0, 2.0]))
        assert (k, value) == (0, 2.0)


class TestParameterSelection:
    def test_halving_eps_doubles_iterations(self):
        for mode, dx in (("unconstrained", None), ("constrained", 1.0)):
            _, n1 = suggest_params(mode, 0.02, 10, 4.0, 1.5, d_x=dx)
            _, n2 = suggest_params(mode, 0.01, 10, 4.0, 1.5, d_x=dx)
            assert n2 == pytest.approx(2 * n1, abs=1)

    def test_constrained_values_by_hand(self):
        # mu = 2*0.01 / (1 * 4 * 8) = 6.25e-4, N = ceil(2 / 0.02) = 100
        mu, n_iters = suggest_params("constrained", 0.01, 1, 2.0, 2.0, d_x=1.0)
        assert mu == pytest.approx(6.25e-4, rel=1e-12)
        assert n_iters == 100

    def test_large_instance_calibration(self):
        # loose factor-of-10 agreement with the m=100, n=1000 calibration
        # point mu = 1e-7, N = 200000 at a target gap of 0.01
        problem = make_least_squares(100, 1000, 0.1, 42)
        mu, n_iters = suggest_params(
            "unconstrained", 0.01, 1000, problem.lip_const, problem.pl_const
        )
        assert 1e-8 <= mu <= 1e-6
        assert 2e4 <= n_iters <= 2e6

    def test_constrained_requires_diameter(self):
        with pytest.raises(ValueError, match="d_x"):
            suggest_params("constrained", 0.1, 5, 2.0, 1.0)
        with pytest.raises(ValueError, match="d_x"):
            suggest_params("constrained", 0.1, 5, 2.0, 1.0, d_x=math.inf)

    def test_theorem_steps(self):
        assert theorem_step_size("unconstrained", 1, 2.0) == pytest.approx(0.025)
        assert theorem_step_size("constrained", 1, 2.0) == pytest.approx(0.5)
        with pytest.raises(ValueError, match="mode"):
            theorem_step_size("other", 1, 2.0)


class TestRecordSerialization:
    def test_npz_roundtrip(self, tmp_path):
        problem = make_least_squares(3, 6, 0.1, 19)
        x0 = np.random.default_rng(7).standard_normal(6)
        cfg = config(mu=1e-5, seed=31, step=1e-3, iters=120, stride=30, lip=2.5)
        record = random_search(problem.objective, x0, cfg)
        path = tmp_path / "run.npz"
        save_run_record(record, path)
        loaded = load_run_record(path)
        assert np.array_equal(loaded.values, record.values)
        assert np.array_equal(loaded.best_values, record.best_values)
        assert np.array_equal(loaded.iterates, record.iterates)
        assert np.array_equal(loaded.final_point, record.final_point)
        assert loaded.seed == record.seed
        assert loaded.best_k == record.best_k
        assert loaded.eval_count == record.eval_count
        assert loaded.config.step_size == cfg.step_size
        assert loaded.config.lip_const == cfg.lip_const
        assert loaded.config.oracle.mu == cfg.oracle.mu

    def test_config_validation(self):
        with pytest.raises(ValueError, match="step_size"):
            SolverConfig(oracle=OracleConfig(mu=0.1), step_size=0.0, num_iters=1)
        with pytest.raises(ValueError, match="num_iters"):
            SolverConfig(oracle=OracleConfig(mu=0.1), step_size=0.1, num_iters=-1)
        with pytest.raises(ValueError, match="record_stride"):
            SolverConfig(
                oracle=OracleConfig(mu=0.1), step_size=0.1, num_iters=1, record_stride=0
            )
