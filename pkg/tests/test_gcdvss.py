"""Optimizer core: proposal machinery, greedy selection, runs, restarts."""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pytest

from simplexopt import (
    MINUS,
    PLUS,
    AllCoordinatesInsignificant,
    MoveProposal,
    NonFiniteObjective,
    Objective,
    TuningParams,
    backoff_feasible_move,
    build_candidate,
    evaluate_proposals,
    make_point,
    optimize,
    random_simplex_point,
    registry_lookup,
    run_stage1,
    select_best,
    significant_set,
    sparsify,
    uniform_point,
)
from simplexopt.gcdvss import ITERATION_CAP, STEP_THRESHOLD


def quadratic(center):
    c = np.asarray(center, dtype=float)
    return Objective(lambda y: ((y - c) ** 2).sum(axis=-1), name="quadratic")


class TestTuningParams:
    def test_defaults(self):
        p = TuningParams()
        assert (p.s_initial, p.rho1, p.rho2) == (1.0, 2.0, 1.05)
        assert (p.phi, p.sparsity) == (1e-3, 1e-3)
        assert (p.max_iter, p.max_runs, p.tol_fun) == (50_000, 1_000, 1e-15)

    @pytest.mark.parametrize("name,phi", [("pl1", 1e-5), ("pl2", 1e-7)])
    def test_precision_presets(self, name, phi):
        p = TuningParams.preset(name)
        assert p.phi == phi and p.sparsity == phi
        assert p.rho1 == 2.0 and p.rho2 == 1.05

    def test_preset_overrides(self):
        p = TuningParams.preset("pl1", max_runs=5)
        assert p.max_runs == 5 and p.phi == 1e-5

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"s_initial": 1e-4},        # must exceed phi
            {"phi": 0.0},
            {"rho1": 1.0},
            {"rho2": 0.9},
            {"sparsity": -1.0},
            {"tol_fun": 0.0},
            {"max_iter": 0},
            {"max_runs": 0},
        ],
    )
    def test_invariants(self, kwargs):
        with pytest.raises(ValueError):
            TuningParams(**kwargs)

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            TuningParams.preset("pl3")


class TestObjective:
    def test_counts_scalar_calls(self):
        obj = quadratic((0.5, 0.5))
        obj((0.5, 0.5))
        obj(make_point((0.25, 0.75)))
        assert obj.evaluations == 2

    def test_counts_block_rows(self):
        obj = quadratic((0.5, 0.5))
        out = obj.evaluate_block(np.array([[0.5, 0.5], [0.25, 0.75], [1.0, 0.0]]))
        assert out.shape == (3,)
        assert obj.evaluations == 3

    def test_scalar_equals_block_row(self):
        obj = quadratic((0.3, 0.7))
        block = np.array([[0.5, 0.5], [0.9, 0.1], [0.25, 0.75]])
        rows = obj.evaluate_block(block)
        singles = np.array([obj(row) for row in block])
        assert np.array_equal(rows, singles)

    def test_non_vectorized_fn(self):
        obj = Objective(lambda row: float(row[0]) ** 2, vectorized=False)
        out = obj.evaluate_block(np.array([[0.4, 0.6], [0.5, 0.5]]))
        assert np.array_equal(out, np.array([0.4**2, 0.5**2]))

    def test_fresh_resets_counter(self):
        obj = quadratic((0.5, 0.5))
        obj((0.5, 0.5))
        child = obj.fresh()
        assert child.evaluations == 0 and child.fn is obj.fn

    def test_bad_block_shape(self):
        obj = quadratic((0.5, 0.5))
        with pytest.raises(ValueError):
            obj.evaluate_block(np.array([0.5, 0.5]))

    def test_counter_under_concurrent_calls(self):
        obj = quadratic((0.5, 0.5))
        with ThreadPoolExecutor(8) as pool:
            list(pool.map(obj, [np.array([0.5, 0.5])] * 200))
        assert obj.evaluations == 200


class TestSignificantSet:
    def test_all_above_threshold(self):
        third = 1.0 / 3.0
        assert significant_set((third, third, third), 0, 1e-3) == {1, 2}

    def test_empty_when_rest_insignificant(self):
        assert significant_set((0.9995, 0.0005, 0.0), 0, 1e-3) == set()

    def test_threshold_is_strict(self):
        assert significant_set((0.5, 0.0005, 0.4995), 1, 1e-3) == {0, 2}

    def test_exclude_validated(self):
        with pytest.raises(IndexError):
            significant_set((0.5, 0.5), 2, 1e-3)


class TestBuildCandidate:
    def test_plus_with_fraction_oracle(self):
        third = 1.0 / 3.0
        q = build_candidate((third, third, third), 0, PLUS, 0.3, {1, 2})
        oracle = [
            Fraction(1, 3) + Fraction(3, 10),
            Fraction(1, 3) - Fraction(3, 20),
            Fraction(1, 3) - Fraction(3, 20),
        ]
        assert sum(oracle) == 1
        np.testing.assert_allclose(q, [float(f) for f in oracle], atol=1e-15)
        assert abs(q.sum() - 1.0) <= 1e-12

    def test_plus_may_leave_the_simplex(self):
        q = build_candidate((0.9, 0.05, 0.05), 0, PLUS, 1.0, {1, 2})
        np.testing.assert_allclose(q, [1.9, -0.45, -0.45], atol=1e-15)

    def test_minus_two_dim(self):
        q = build_candidate((0.5, 0.5), 1, MINUS, 0.2, {0})
        np.testing.assert_allclose(q, [0.7, 0.3], atol=1e-15)

    def test_sum_preserved_on_random_moves(self, rng):
        for _ in range(200):
            m = int(rng.integers(2, 30))
            g = rng.standard_exponential(m)
            p = g / g.sum()
            i = int(rng.integers(m))
            sig = {int(j) for j in range(m) if j != i and rng.random() < 0.7} or {(i + 1) % m}
            step = float(rng.uniform(0, 1))
            direction = PLUS if rng.random() < 0.5 else MINUS
            q = build_candidate(p, i, direction, step, sig)
            assert abs(q.sum() - p.sum()) <= 1e-12

    def test_preconditions(self):
        with pytest.raises(ValueError):
            build_candidate((0.5, 0.5), 0, PLUS, 0.1, set())
        with pytest.raises(ValueError):
            build_candidate((0.5, 0.5), 0, PLUS, 0.1, {0, 1})
        with pytest.raises(ValueError):
            build_candidate((0.5, 0.5), 0, "sideways", 0.1, {1})


class TestBackoffFeasibleMove:
    def test_backoff_sequence_verified_exhaustively(self):
        p = (0.9, 0.05, 0.05)
        pr = backoff_feasible_move(p, 0, PLUS, 1.0, 2.0, 1e-3, 1e-3)
        assert not pr.skipped
        assert pr.local_step == 0.0625
        np.testing.assert_allclose(pr.candidate, [0.9625, 0.01875, 0.01875], atol=1e-15)
        # oracle: every earlier rung must produce an infeasible vector
        from simplexopt import is_feasible

        for s in (1.0, 0.5, 0.25, 0.125):
            assert not is_feasible(build_candidate(p, 0, PLUS, s, {1, 2}))

    def test_vertex_is_skipped(self):
        pr = backoff_feasible_move((1.0, 0.0, 0.0), 0, PLUS, 1.0, 2.0, 1e-3, 1e-3)
        assert pr.skipped and pr.candidate is None

    def test_minus_to_boundary(self):
        pr = backoff_feasible_move((0.5, 0.5), 0, MINUS, 1.0, 2.0, 1e-3, 1e-3)
        assert pr.local_step == 0.5
        assert np.array_equal(pr.candidate, np.array([0.0, 1.0]))

    def test_threshold_exhaustion_skips(self):
        # p0 = 0, so no minus step above phi is ever feasible
        pr = backoff_feasible_move((0.0, 1.0), 0, MINUS, 1.0, 2.0, 1e-3, 1e-3)
        assert pr.skipped


class TestEvaluateProposals:
    @staticmethod
    def proposals_for(point, step=0.25, rho=2.0, phi=1e-3, lam=1e-3):
        m = len(point)
        return [
            backoff_feasible_move(point, i, d, step, rho, phi, lam)
            for d in (PLUS, MINUS)
            for i in range(m)
        ]

    def test_all_live_counts_all(self):
        obj = quadratic((0.3, 0.3, 0.4))
        props = self.proposals_for((0.3, 0.3, 0.4))
        assert not any(pr.skipped for pr in props)
        incumbent = obj((0.3, 0.3, 0.4))
        before = obj.evaluations
        values = evaluate_proposals(obj, props, incumbent)
        assert obj.evaluations - before == 2 * 3
        assert len(values) == 6

    def test_all_skipped_report_incumbent(self):
        obj = quadratic((1.0, 0.0))
        props = [
            MoveProposal(0, PLUS, 0.0, None, True),
            MoveProposal(0, MINUS, 0.0, None, True),
        ]
        values = evaluate_proposals(obj, props, incumbent=3.25)
        assert np.array_equal(values, np.array([3.25, 3.25]))
        assert obj.evaluations == 0

    def test_threads_are_bitwise_identical(self):
        spec = registry_lookup("easom")
        point = np.array([0.2, 0.5, 0.3])
        props = self.proposals_for(point)
        seq = evaluate_proposals(spec.fresh_objective(), props, incumbent=0.0, threads=1)
        par = evaluate_proposals(spec.fresh_objective(), props, incumbent=0.0, threads=8)
        assert np.array_equal(seq, par)

    def test_non_finite_value_raises_with_index(self):
        obj = Objective(lambda y: np.where(y[..., 0] > 0.6, np.inf, 0.0))
        props = self.proposals_for((0.5, 0.5), step=0.2)
        with pytest.raises(NonFiniteObjective) as err:
            evaluate_proposals(obj, props, incumbent=0.0)
        assert err.value.index == 0  # the plus move on coordinate 0


class TestSelectBest:
    @staticmethod
    def dummy_proposals(candidates):
        return [MoveProposal(i, PLUS, 0.1, np.asarray(c, dtype=float), False) for i, c in enumerate(candidates)]

    def test_unique_strict_minimum(self):
        plus = self.dummy_proposals([(1.0, 0.0), (0.0, 1.0)])
        minus = self.dummy_proposals([(0.5, 0.5), (0.25, 0.75)])
        chosen = select_best((3.0, 1.0), (2.0, 2.5), plus, minus, incumbent=2.2)
        assert np.array_equal(chosen.coords, np.array([0.0, 1.0]))

    def test_no_strict_improvement(self):
        plus = self.dummy_proposals([(1.0, 0.0)])
        minus = self.dummy_proposals([(0.0, 1.0)])
        assert select_best((2.0,), (2.0,), plus, minus, incumbent=2.0) is None

    def test_tie_prefers_minus(self):
        plus = self.dummy_proposals([(1.0, 0.0)])
        minus = self.dummy_proposals([(0.0, 1.0)])
        chosen = select_best((0.9,), (0.9,), plus, minus, incumbent=1.0)
        assert np.array_equal(chosen.coords, np.array([0.0, 1.0]))

    def test_argmin_tie_breaks_to_lowest_index(self):
        plus = self.dummy_proposals([(1.0, 0.0), (0.0, 1.0)])
        minus = self.dummy_proposals([(0.5, 0.5), (0.25, 0.75)])
        chosen = select_best((0.5, 0.5), (0.7, 0.7), plus, minus, incumbent=1.0)
        assert np.array_equal(chosen.coords, np.array([1.0, 0.0]))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            select_best((1.0,), (1.0, 2.0), [], [], incumbent=0.0)


class TestSparsify:
    def test_garbage_redistribution(self):
        out = sparsify((0.0005, 0.5, 0.4995), 1e-3)
        np.testing.assert_allclose(out.coords, [0.0, 0.50025, 0.49975], atol=1e-15)
        assert abs(out.coords.sum() - 1.0) <= 1e-12

    def test_unchanged_when_all_significant(self):
        pt = (0.3, 0.3, 0.4)
        out = sparsify(pt, 1e-3)
        assert np.array_equal(out.coords, np.asarray(pt))

    def test_vertex_unchanged(self):
        out = sparsify((1.0, 0.0, 0.0), 1e-3)
        assert np.array_equal(out.coords, np.array([1.0, 0.0, 0.0]))

    def test_all_insignificant_is_an_error(self):
        with pytest.raises(AllCoordinatesInsignificant):
            sparsify((0.4, 0.3, 0.3), sparsity=0.5)

    def test_no_coordinate_left_in_the_dead_zone(self, rng):
        lam = 1e-2
        for _ in range(200):
            m = int(rng.integers(2, 12))
            g = rng.standard_exponential(m)
            p = g / g.sum()
            out = sparsify(p, lam).coords
            assert not ((out > 0) & (out <= lam)).any()
            assert abs(out.sum() - p.sum()) <= 1e-12


class TestRunStage1:
    def test_convex_descent(self):
        obj = quadratic((0.3, 0.7))
        report = run_stage1(obj, make_point((0.5, 0.5)), TuningParams(), rho=2.0)
        assert report.final_value < 1e-4
        assert report.termination == STEP_THRESHOLD

    def test_start_at_minimum_stays_put(self):
        c = (0.3, 0.7)
        obj = quadratic(c)
        report = run_stage1(obj, make_point(c), TuningParams(), rho=2.0)
        assert report.final_value <= obj(c)
        assert np.abs(report.final_point.coords - np.asarray(c)).max() <= 1e-3

    def test_trace_is_monotone_and_feasible(self):
        from simplexopt import is_feasible

        obj = registry_lookup("easom").fresh_objective()
        report = run_stage1(obj, uniform_point(3), TuningParams(), rho=2.0, trace=True)
        values = [rec.value for rec in report.trace]
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert all(is_feasible(rec.point) for rec in report.trace)
        steps = [rec.step for rec in report.trace]
        assert all(a >= b for a, b in zip(steps, steps[1:]))

    def test_evaluation_accounting(self):
        obj = registry_lookup("easom").fresh_objective()
        report = run_stage1(obj, uniform_point(3), TuningParams(), rho=2.0)
        m = 3
        assert report.max_evals_per_iteration <= 2 * m + 1
        assert report.evaluations == obj.evaluations
        assert report.evaluations <= (2 * m + 1) * report.iterations

    def test_iteration_cap(self):
        obj = quadratic((0.3, 0.7))
        report = run_stage1(obj, make_point((0.5, 0.5)), TuningParams(max_iter=3), rho=2.0)
        assert report.termination == ITERATION_CAP
        assert report.iterations == 3

    def test_non_finite_objective_aborts(self):
        obj = Objective(lambda y: np.full(y.shape[:-1], np.nan))
        with pytest.raises(NonFiniteObjective):
            run_stage1(obj, make_point((0.5, 0.5)), TuningParams(), rho=2.0)

    def test_rho_validated(self):
        with pytest.raises(ValueError):
            run_stage1(quadratic((0.5, 0.5)), make_point((0.5, 0.5)), TuningParams(), rho=1.0)


class TestOptimize:
    def test_convex_reaches_analytic_minimizer(self):
        c = np.array([0.3, 0.7])
        result = optimize(quadratic(c), make_point((0.5, 0.5)))
        assert np.abs(result.solution.coords - c).max() < 1e-3
        assert result.value == result.runs[-1].final_value
        assert result.value <= min(r.final_value for r in result.runs)

    def test_escapes_gaussian_local_trap(self):
        spec = registry_lookup("gaussian_max")
        result = optimize(spec.fresh_objective(), make_point((0.8, 0.2)))
        assert np.abs(result.solution.coords - np.array([0.25, 0.75])).max() < 1e-2
        assert abs(result.value - spec.known_optimum_value) < 1e-2

    def test_easom_twenty_seeded_starts_all_succeed(self):
        spec = registry_lookup("easom")
        children = np.random.SeedSequence(35).spawn(20)
        for child in children:
            start = random_simplex_point(3, np.random.default_rng(child))
            result = optimize(spec.fresh_objective(), start)
            assert abs(result.value - (-1.0)) < 1e-2

    def test_converged_flag(self):
        c = np.array([0.3, 0.7])
        full = optimize(quadratic(c), make_point((0.5, 0.5)))
        assert full.converged
        single = optimize(quadratic(c), make_point((0.5, 0.5)), TuningParams(max_runs=1))
        assert not single.converged and len(single.runs) == 1

    def test_restarts_use_previous_solution(self):
        c = np.array([0.3, 0.7])
        result = optimize(quadratic(c), make_point((0.5, 0.5)))
        finals = [r.final_value for r in result.runs]
        assert all(a >= b for a, b in zip(finals, finals[1:]))
        assert np.array_equal(result.runs[-1].final_point.coords, result.solution.coords)

    def test_deterministic_rerun(self):
        spec = registry_lookup("easom")
        start = make_point((0.2, 0.5, 0.3))
        a = optimize(spec.fresh_objective(), start)
        b = optimize(spec.fresh_objective(), start)
        assert np.array_equal(a.solution.coords, b.solution.coords)
        assert a.value == b.value
        assert a.total_evaluations == b.total_evaluations

    def test_total_evaluations_sums_runs(self):
        spec = registry_lookup("easom")
        result = optimize(spec.fresh_objective(), make_point((0.2, 0.5, 0.3)))
        assert result.total_evaluations == sum(r.evaluations for r in result.runs)

    def test_precision_monotonicity_on_convex_quadratic(self):
        # tighter step thresholds give monotonically closer solutions
        for dim in (2, 5, 25):
            c = np.arange(1, dim + 1, dtype=float)
            c /= c.sum()
            start = random_simplex_point(dim, np.random.default_rng(2024))
            errors = []
            for preset in ("default", "pl1", "pl2"):
                result = optimize(quadratic(c), start, TuningParams.preset(preset))
                errors.append(np.abs(result.solution.coords - c).max())
            assert errors[0] >= errors[1] >= errors[2]
