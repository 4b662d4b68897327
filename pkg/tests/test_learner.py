"""Regret penalties, posteriors, weighted-median prediction, and tuning."""
import math

import numpy as np
import pytest

from breadsched.comfort import AxisSpec, ComfortParams, GridSpec, HypothesisGrid, comfort_eval
from breadsched.config import LearnerConfig
from breadsched.learner import (
    LearnerParams,
    Observation,
    PenaltyTable,
    best_response,
    kernel,
    penalty,
    situation_distance,
    tune,
    weighted_median_offset,
)

RUN_PERIOD = 84
OFFSETS = np.arange(10, 105)
PARAMS = ComfortParams(heights=(10.0, 12.0, 9.5), peaks=(32, 52, 78), slope=0.7)
FULL_OFFSETS = np.arange(10, 192)


def random_observation(rng: np.random.Generator, scale: float = 5.0) -> Observation:
    return Observation(
        stock_kg=float(rng.uniform(0.0, 0.45)),
        weekend=bool(rng.integers(2)),
        costs=rng.uniform(0.0, scale, 182),
        chosen_offset=int(rng.choice(OFFSETS)),
        run_period=RUN_PERIOD,
    )


def rational_observation(rng: np.random.Generator, params: ComfortParams) -> Observation:
    costs = rng.uniform(0.0, 5.0, 182)
    chosen = best_response(params, costs[: OFFSETS.size], OFFSETS, RUN_PERIOD)
    return Observation(
        stock_kg=float(rng.uniform(0.0, 0.45)),
        weekend=bool(rng.integers(2)),
        costs=costs,
        chosen_offset=chosen,
        run_period=RUN_PERIOD,
    )


def scan_best(params: ComfortParams, costs, offsets) -> int:
    """Independent max scan through comfort_eval."""
    best_off, best_u = None, -np.inf
    for off, cost in zip(offsets, costs):
        u = comfort_eval(int(off), params, RUN_PERIOD) - cost
        if u > best_u:
            best_off, best_u = int(off), u
    return best_off


class TestSituationDistance:
    def test_identical_situations(self):
        assert situation_distance(0.2, False, 0.2, False) == 0.0

    def test_symmetry(self):
        a = situation_distance(0.1, True, 0.4, False)
        b = situation_distance(0.4, False, 0.1, True)
        assert a == b

    def test_stock_difference_at_unit_weight(self):
        assert situation_distance(0.3, False, 0.1, False, stock_weight=1.0) == pytest.approx(0.2)

    def test_weekend_mismatch_adds_its_weight(self):
        d = situation_distance(0.2, True, 0.2, False, weekend_weight=0.3)
        assert d == pytest.approx(0.3)


class TestKernel:
    def test_zero_distance(self):
        assert kernel(0.0, 5.0) == 1.0

    def test_beta_zero_ignores_distance(self):
        assert kernel(1.7, 0.0) == 1.0

    def test_beta_five_distance_point_two(self):
        assert kernel(0.2, 5.0) == pytest.approx(math.exp(-0.2))


class TestBestResponse:
    def test_zero_costs_picks_the_tallest_peak(self):
        got = best_response(PARAMS, np.zeros(FULL_OFFSETS.size), FULL_OFFSETS, RUN_PERIOD)
        assert got == 64  # first instance of the 12.0-height peak

    def test_constant_cost_shift_leaves_choice_alone(self):
        rng = np.random.default_rng(0)
        costs = rng.uniform(0, 5, OFFSETS.size)
        a = best_response(PARAMS, costs, OFFSETS, RUN_PERIOD)
        b = best_response(PARAMS, costs + 7.3, OFFSETS, RUN_PERIOD)
        assert a == b

    def test_matches_independent_max_scan(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            params = ComfortParams(
                heights=tuple(rng.uniform(9.0, 14.7, 3)),
                peaks=tuple(int(p) for p in sorted(rng.choice(96, 3, replace=False))),
                slope=float(rng.uniform(0.5, 0.9)),
            )
            costs = rng.uniform(0, 6, OFFSETS.size)
            got = best_response(params, costs, OFFSETS, RUN_PERIOD)
            assert got == scan_best(params, costs, OFFSETS)


class TestPenalty:
    def test_zero_for_a_rational_choice(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            obs = rational_observation(rng, PARAMS)
            assert penalty(PARAMS, obs, OFFSETS) == 0.0

    def test_single_beating_offset_contributes_its_margin(self):
        # kill the echo of the tall peak with a targeted cost, choose the
        # offset one period before it: exactly one scenario wins, by the slope
        costs = np.zeros(182)
        costs[160 - 10] = 5.0
        obs = Observation(stock_kg=0.1, weekend=False, costs=costs,
                          chosen_offset=63, run_period=RUN_PERIOD)
        assert penalty(PARAMS, obs, FULL_OFFSETS) == pytest.approx(0.7)

    def test_matches_naive_double_loop(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            obs = random_observation(rng)
            utilities = {}
            for j, off in enumerate(OFFSETS):
                utilities[off] = comfort_eval(int(off), PARAMS, RUN_PERIOD) - obs.costs[j]
            chosen_u = utilities[obs.chosen_offset]
            expected = sum(max(0.0, u - chosen_u) for u in utilities.values())
            assert penalty(PARAMS, obs, OFFSETS) == pytest.approx(expected, rel=1e-12)


class TestWeightedMedian:
    def test_single_live_hypothesis(self):
        assert weighted_median_offset(np.array([33]), np.array([1.0]), OFFSETS) == OFFSETS[33]

    def test_point_six_point_four(self):
        best_j = np.array([14, 50])  # offsets 24 and 60
        assert weighted_median_offset(best_j, np.array([0.6, 0.4]), OFFSETS) == 24

    def test_even_split_takes_the_smaller(self):
        best_j = np.array([14, 50])
        assert weighted_median_offset(best_j, np.array([0.5, 0.5]), OFFSETS) == 24

    def test_minimizes_expected_absolute_error(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n_hyp = 40
            best_j = rng.integers(0, OFFSETS.size, n_hyp)
            posterior = rng.dirichlet(np.ones(n_hyp))
            got = weighted_median_offset(best_j, posterior, OFFSETS)
            responses = OFFSETS[best_j]

            def expected_mae(delta):
                return float(np.sum(posterior * np.abs(delta - responses)))

            oracle = min(OFFSETS, key=expected_mae)
            assert expected_mae(got) <= expected_mae(oracle) + 1e-9
            assert got == oracle


@pytest.fixture
def table(small_grid) -> PenaltyTable:
    return PenaltyTable(small_grid, LearnerParams(), RUN_PERIOD, OFFSETS)


class TestPenaltyTable:
    def test_universally_optimal_choice_changes_nothing(self, table):
        costs = np.full(182, 1000.0)
        costs[40] = 0.0  # offset 50 is unbeatable under every curve
        obs = Observation(stock_kg=0.2, weekend=False, costs=costs,
                          chosen_offset=50, run_period=RUN_PERIOD)
        table.update(obs)
        assert np.all(table.table == 0.0)
        assert table.n_obs == 1

    def test_same_observation_twice_doubles_the_table(self, table):
        obs = random_observation(np.random.default_rng(6))
        table.update(obs)
        once = table.table.copy()
        table.update(obs)
        assert np.array_equal(table.table, 2.0 * once)

    def test_update_order_does_not_matter(self, small_grid):
        rng = np.random.default_rng(7)
        a, b = random_observation(rng), random_observation(rng)
        t1 = PenaltyTable(small_grid, LearnerParams(), RUN_PERIOD, OFFSETS)
        t2 = PenaltyTable(small_grid, LearnerParams(), RUN_PERIOD, OFFSETS)
        t1.update(a); t1.update(b)
        t2.update(b); t2.update(a)
        assert np.allclose(t1.table, t2.table, rtol=1e-9)

    def test_numba_and_numpy_engines_agree(self, table):
        rng = np.random.default_rng(8)
        for _ in range(3):
            obs = random_observation(rng)
            s_fast, b_fast = table.regret_and_best(obs, engine="numba")
            s_ref, b_ref = table.regret_and_best(obs, engine="numpy")
            assert np.allclose(s_fast, s_ref, rtol=1e-9, atol=1e-12)
            assert np.array_equal(b_fast, b_ref)

    def test_unknown_engine_rejected(self, table):
        obs = random_observation(np.random.default_rng(9))
        with pytest.raises(ValueError, match="unknown engine"):
            table.regret_and_best(obs, engine="fortran")

    def test_empty_table_posterior_is_uniform(self, table):
        p = table.posterior(0)
        assert np.allclose(p, 1.0 / table.grid.n_params)

    def test_posterior_rows_normalize(self, table):
        rng = np.random.default_rng(10)
        for _ in range(6):
            table.update(random_observation(rng))
        for cell in range(8):
            assert abs(table.posterior(cell).sum() - 1.0) < 1e-9

    def test_lower_penalty_never_means_lower_probability(self, table):
        rng = np.random.default_rng(11)
        for _ in range(4):
            table.update(random_observation(rng))
        row, p = table.table[2], table.posterior(2)
        idx = rng.integers(0, row.size, size=(200, 2))
        for i, j in idx:
            if row[i] <= row[j]:
                assert p[i] >= p[j]

    def test_gamma_rescaling_preserves_ranking(self, table):
        rng = np.random.default_rng(12)
        for _ in range(4):
            table.update(random_observation(rng))
        p1 = table.posterior(1, gamma=5.0)
        p2 = table.posterior(1, gamma=10.0)
        pairs = rng.integers(0, p1.size, size=(500, 2))
        for i, j in pairs:
            # no strict reversal; float rounding may merge but never flip
            assert not (p1[i] > p1[j] and p2[i] < p2[j])
            assert not (p1[i] < p1[j] and p2[i] > p2[j])

    def test_extreme_beta_localizes_the_update(self, small_grid):
        params = LearnerParams(beta=5000.0)
        table = PenaltyTable(small_grid, params, RUN_PERIOD, OFFSETS)
        obs = Observation(
            stock_kg=0.075,  # dead centre of bucket 0
            weekend=False,
            costs=np.random.default_rng(13).uniform(0, 5, 182),
            chosen_offset=30,
            run_period=RUN_PERIOD,
        )
        table.update(obs)
        assert table.table[0].max() > 0.0
        for cell in range(1, 8):
            assert np.all(np.abs(table.table[cell]) < 1e-12)

    def test_rejects_choice_outside_offer_set(self, table):
        obs = Observation(stock_kg=0.1, weekend=False, costs=np.zeros(182),
                          chosen_offset=150, run_period=RUN_PERIOD)
        with pytest.raises(ValueError, match="not in the offer set"):
            table.update(obs)

    def test_rejects_short_cost_vector(self, table):
        obs = Observation(stock_kg=0.1, weekend=False, costs=np.zeros(50),
                          chosen_offset=30, run_period=RUN_PERIOD)
        with pytest.raises(ValueError, match="shorter than the offer set"):
            table.update(obs)

    def test_predict_rejects_foreign_planning_period(self, table):
        obs = Observation(stock_kg=0.1, weekend=False, costs=np.zeros(182),
                          chosen_offset=30, run_period=40)
        with pytest.raises(ValueError, match="planned at period"):
            table.predict(obs)

    def test_unknown_prior_rejected(self, small_grid):
        with pytest.raises(ValueError, match="unknown prior"):
            PenaltyTable(small_grid, LearnerParams(prior="spline"), RUN_PERIOD, OFFSETS)

    def test_center_quadratic_prior_prefers_the_middle(self, small_grid):
        params = LearnerParams(k0=1.0, prior="center-quadratic")
        table = PenaltyTable(small_grid, params, RUN_PERIOD, OFFSETS)
        assert table.table.min() >= 0.0
        center = ComfortParams(heights=(9.9, 9.9, 9.9), peaks=(30, 50, 78), slope=0.5)
        corner = ComfortParams(heights=(9.0, 9.0, 9.0), peaks=(30, 50, 78), slope=0.5)
        i_center = small_grid.index_of(center)
        i_corner = small_grid.index_of(corner)
        assert table.table[0, i_center] < table.table[0, i_corner]

    def test_predict_on_single_hypothesis_grid(self):
        one = lambda v: AxisSpec(v, 1.0, 1)
        grid = HypothesisGrid(GridSpec(
            peak1=one(32), peak2=one(52), peak3=one(78),
            height=AxisSpec(12.0, 1.0, 1), slope=AxisSpec(0.7, 0.1, 1),
        ))
        table = PenaltyTable(grid, LearnerParams(), RUN_PERIOD, OFFSETS)
        obs = random_observation(np.random.default_rng(14))
        only = grid.params_at(0)
        expected = best_response(only, obs.costs[: OFFSETS.size], OFFSETS, RUN_PERIOD)
        assert table.predict(obs) == expected

    def test_predicted_offset_is_the_posterior_weighted_median(self, table):
        rng = np.random.default_rng(15)
        for _ in range(5):
            table.update(rational_observation(rng, PARAMS))
        obs = random_observation(rng)
        got = table.predict(obs)
        B = table.best_responses(obs.costs)
        p = table.posterior(obs.cell.index)
        responses = OFFSETS[B]
        mass_below = float(p[responses <= got].sum())
        mass_strictly_below = float(p[responses < got].sum())
        assert mass_below >= 0.5 - 1e-9
        assert mass_strictly_below < 0.5 + 1e-9


class TestSnapshot:
    def test_round_trip_preserves_everything(self, table, tmp_path):
        rng = np.random.default_rng(16)
        observations = [random_observation(rng) for _ in range(4)]
        for obs in observations:
            table.update(obs)
        path = tmp_path / "table.bspt"
        table.save(path)
        loaded = PenaltyTable.load(path)
        assert loaded.params == table.params
        assert loaded.n_obs == table.n_obs
        assert loaded.run_period == table.run_period
        assert loaded.horizon == table.horizon
        assert np.array_equal(loaded.offsets, table.offsets)
        quantized = table.table.astype("<f4").astype(np.float64)
        assert np.array_equal(loaded.table, quantized)
        probe = random_observation(rng)
        assert loaded.predict(probe) == table.predict(probe)

    def test_load_rejects_foreign_grid(self, table, small_grid, tmp_path):
        path = tmp_path / "table.bspt"
        table.save(path)
        other = HypothesisGrid(small_grid.spec.with_height_stride(2))
        with pytest.raises(ValueError, match="does not match"):
            PenaltyTable.load(path, grid=other)

    def test_load_rejects_not_a_snapshot(self, tmp_path):
        path = tmp_path / "junk.bspt"
        path.write_bytes(b"CSV,not,a,snapshot")
        with pytest.raises(ValueError, match="not a penalty table snapshot"):
            PenaltyTable.load(path)


class TestTune:
    def test_single_candidate_pair_comes_back(self, small_grid):
        rng = np.random.default_rng(17)
        observations = [random_observation(rng) for _ in range(5)]
        result = tune(observations, small_grid, LearnerParams(), RUN_PERIOD, OFFSETS,
                      betas=(5.0,), gammas=(5.0,))
        assert (result.beta, result.gamma) == (5.0, 5.0)
        assert len(result.report) == 1

    def test_default_candidates_cover_the_operating_point(self):
        cfg = LearnerConfig()
        assert 5 in cfg.beta_candidates
        assert 5 in cfg.gamma_candidates

    def test_rejects_empty_training_set(self, small_grid):
        with pytest.raises(ValueError):
            tune([], small_grid, LearnerParams(), RUN_PERIOD, OFFSETS)

    def test_report_matches_independent_prequential_replay(self, small_grid):
        rng = np.random.default_rng(18)
        observations = [rational_observation(rng, PARAMS) for _ in range(8)]
        betas, gammas = (0.0, 5.0), (1.0, 5.0)
        result = tune(observations, small_grid, LearnerParams(), RUN_PERIOD,
                      OFFSETS, betas=betas, gammas=gammas)

        for b in betas:
            for g in gammas:
                fresh = PenaltyTable(
                    small_grid, LearnerParams(beta=b, gamma=g), RUN_PERIOD, OFFSETS
                )
                err = 0.0
                for obs in observations:
                    err += abs(fresh.predict(obs) - obs.chosen_offset) * 0.25
                    fresh.update(obs)
                reported = next(
                    r["mae_hours"] for r in result.report
                    if r["beta"] == b and r["gamma"] == g
                )
                assert reported == pytest.approx(err / len(observations), abs=1e-12)

        best = min(result.report, key=lambda r: r["mae_hours"])
        assert result.mae_hours == best["mae_hours"]
        assert (result.beta, result.gamma) == (best["beta"], best["gamma"])

    def test_winner_table_is_fully_trained(self, small_grid):
        rng = np.random.default_rng(19)
        observations = [random_observation(rng) for _ in range(6)]
        result = tune(observations, small_grid, LearnerParams(), RUN_PERIOD, OFFSETS,
                      betas=(0.0, 5.0), gammas=(5.0,))
        winner = result.tables[result.beta]
        assert winner.n_obs == len(observations)
        assert winner.params.beta == result.beta
        assert winner.params.gamma == result.gamma


def test_observation_cell_property():
    obs = Observation(stock_kg=0.31, weekend=True, costs=np.zeros(182),
                      chosen_offset=30, run_period=RUN_PERIOD)
    assert obs.cell.index == 6
