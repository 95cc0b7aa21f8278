import itertools
import math

import numpy as np
import pytest

from ioha import (
    Decision,
    GlickoState,
    glicko2_game_update,
    glicko2_rank,
    ks_two_sample,
    pairwise_ks,
)
from ioha.errors import EmptySample, FewerThanTwoAlgorithms

from oracles import brute_force_ks_statistic

INF = math.inf


class TestKsTwoSample:
    def test_identical_samples(self):
        d, p = ks_two_sample([1, 2, 3], [1, 2, 3])
        assert d == 0 and p == 1

    def test_disjoint_supports(self):
        d, _ = ks_two_sample([1, 2, 3], [4, 5, 6])
        assert d == 1

    def test_interleaved(self):
        d, _ = ks_two_sample([1, 3, 5], [2, 4, 6])
        assert d == pytest.approx(1 / 3)

    def test_extreme_p_value(self):
        _, p = ks_two_sample(list(range(1, 21)), list(range(101, 121)))
        assert p < 1e-6

    def test_empty_sample(self):
        with pytest.raises(EmptySample):
            ks_two_sample([], [1])

    def test_symmetry_and_permutation_invariance(self):
        rng = np.random.default_rng(2)
        a = rng.integers(1, 10, size=9).astype(float)
        b = rng.integers(1, 10, size=7).astype(float)
        d1, p1 = ks_two_sample(a, b)
        d2, p2 = ks_two_sample(b, a)
        d3, _ = ks_two_sample(rng.permutation(a), rng.permutation(b))
        assert d1 == d2 == d3 and p1 == p2

    def test_monotone_transform_invariance(self):
        a = [1.0, 4.0, 9.0, 16.0]
        b = [2.0, 3.0, 5.0, 30.0]
        d1, _ = ks_two_sample(a, b)
        d2, _ = ks_two_sample([math.sqrt(x) for x in a], [math.sqrt(x) for x in b])
        assert d1 == d2

    def test_infinities_sort_above_finite(self):
        d, _ = ks_two_sample([1.0, INF], [1.0, INF])
        assert d == 0
        d, _ = ks_two_sample([1.0, INF], [2.0, INF])
        assert d == 0.5

    def test_exhaustive_small_samples(self):
        # every multiset pair of sizes 1..4 over values {1..5}
        values = range(1, 6)
        multisets = [
            list(combo)
            for n in range(1, 5)
            for combo in itertools.combinations_with_replacement(values, n)
        ]
        for a in multisets:
            for b in multisets:
                d, _ = ks_two_sample(a, b)
                assert d == pytest.approx(brute_force_ks_statistic(a, b), abs=1e-12)

    def test_d_zero_iff_same_empirical_distribution(self):
        assert ks_two_sample([1, 1, 2], [1, 2, 1])[0] == 0
        assert ks_two_sample([1, 1, 2], [1, 2, 2])[0] > 0


class TestPairwiseKs:
    def test_bonferroni_multiplier(self):
        samples = {
            "A": np.arange(1.0, 21.0),
            "B": np.arange(101.0, 121.0),
            "C": np.arange(51.0, 71.0),
        }
        results, _ = pairwise_ks(samples, alpha=0.01)
        assert len(results) == 3
        for res in results.values():
            assert res.p_corrected == min(1.0, 3 * res.p_raw)
            assert res.p_corrected >= res.p_raw

    def test_identical_samples_no_decision(self):
        samples = {"A": [1.0, 2.0, 3.0], "B": [1.0, 2.0, 3.0]}
        results, graph = pairwise_ks(samples, alpha=0.01)
        assert results[("A", "B")].decision is Decision.NO_DECISION
        assert graph.edges == []

    def test_clear_dominance_edge(self):
        samples = {"A": np.arange(1.0, 21.0), "B": np.arange(101.0, 121.0)}
        results, graph = pairwise_ks(samples, alpha=0.01)
        assert results[("A", "B")].decision is Decision.LEFT_DOMINATES
        assert graph.edges == [("A", "B")]

    def test_no_two_cycles(self):
        rng = np.random.default_rng(3)
        samples = {
            name: rng.integers(1, 100, size=15).astype(float) for name in "ABCDE"
        }
        _, graph = pairwise_ks(samples, alpha=0.5)
        assert len(set(graph.edges)) == len(graph.edges)
        for winner, loser in graph.edges:
            assert (loser, winner) not in graph.edges

    def test_failures_counted_as_budget_for_direction(self):
        samples = {"A": [1.0, 1.0, INF, INF, INF], "B": [50.0] * 5}
        budgets = {"A": np.full(5, 100.0), "B": np.full(5, 100.0)}
        results, _ = pairwise_ks(samples, alpha=0.9, budgets=budgets)
        # A's penalized mean (1+1+100*3)/5 = 60.4 > B's 50: B dominates
        assert results[("A", "B")].decision is Decision.RIGHT_DOMINATES

    def test_needs_two_algorithms(self):
        with pytest.raises(FewerThanTwoAlgorithms):
            pairwise_ks({"A": [1.0]})

    def test_twelve_algorithms_give_sixty_six_pairs(self):
        rng = np.random.default_rng(8)
        samples = {f"alg{i:02d}": rng.integers(1, 50, size=11).astype(float) for i in range(12)}
        results, graph = pairwise_ks(samples, alpha=0.01)
        assert len(results) == 66
        assert len(graph.nodes) == 12
        for res in results.values():
            assert res.p_corrected == min(1.0, 66 * res.p_raw)


class TestGlickoUpdate:
    def test_worked_example(self):
        player = GlickoState(1500, 200, 0.06)
        opponents = [
            (GlickoState(1400, 30, 0.06), 1.0),
            (GlickoState(1550, 100, 0.06), 0.0),
            (GlickoState(1700, 300, 0.06), 0.0),
        ]
        updated = glicko2_game_update(player, opponents, tau=0.5)
        assert updated.rating == pytest.approx(1464.06, abs=0.5)
        assert updated.deviation == pytest.approx(151.52, abs=0.5)
        assert updated.volatility == pytest.approx(0.05999, abs=1e-4)

    def test_no_games_inflates_deviation_only(self):
        player = GlickoState(1500, 200, 0.06)
        updated = glicko2_game_update(player, [])
        assert updated.rating == player.rating
        assert updated.volatility == player.volatility
        phi = player.deviation / 173.7178
        expected = math.sqrt(phi**2 + player.volatility**2) * 173.7178
        assert updated.deviation == pytest.approx(expected)

    def test_win_increases_rating(self):
        player = GlickoState()
        updated = glicko2_game_update(player, [(GlickoState(), 1.0)])
        assert updated.rating > player.rating

    def test_loss_decreases_rating(self):
        player = GlickoState()
        updated = glicko2_game_update(player, [(GlickoState(), 0.0)])
        assert updated.rating < player.rating


class TestGlickoRank:
    def test_deterministic_dominance(self):
        samples = {
            "fast": {("f", 2): [1.0, 2.0, 3.0]},
            "slow": {("f", 2): [100.0, 200.0, 300.0]},
        }
        for seed in range(10):
            ranked = glicko2_rank(samples, rounds=25, seed=seed)
            assert [alg for alg, _ in ranked] == ["fast", "slow"]
            assert ranked[0][1].rating > ranked[1][1].rating

    def test_constant_samples_order_over_seeds(self):
        samples = {
            "a1": {("f", 2): [1.0]},
            "a2": {("f", 2): [2.0]},
            "a3": {("f", 2): [3.0]},
        }
        for seed in range(100):
            ranked = glicko2_rank(samples, rounds=25, seed=seed)
            assert [alg for alg, _ in ranked] == ["a1", "a2", "a3"]

    def test_identical_samples_ratings_close(self):
        # symmetric draws: across seeds, rating gaps stay within the
        # uncertainty of a rating difference, sqrt(RD^2 + RD^2)
        sample = [3.0, 5.0, 8.0]
        samples = {name: {("f", 2): sample} for name in ("A", "B", "C")}
        spreads, scales = [], []
        for seed in range(20):
            ranked = glicko2_rank(samples, rounds=25, seed=seed)
            ratings = [state.rating for _, state in ranked]
            spreads.append(max(ratings) - min(ratings))
            scales.append(math.sqrt(2) * max(state.deviation for _, state in ranked))
        assert np.mean(spreads) <= np.mean(scales)

    def test_seed_reproducibility(self):
        samples = {
            "A": {("f", 2): [1.0, 5.0, 9.0]},
            "B": {("f", 2): [2.0, 4.0, 8.0]},
        }
        first = glicko2_rank(samples, rounds=10, seed=42)
        second = glicko2_rank(samples, rounds=10, seed=42)
        assert first == second

    def test_infinite_loses_to_finite(self):
        samples = {
            "finisher": {("f", 2): [5.0]},
            "failer": {("f", 2): [INF]},
        }
        ranked = glicko2_rank(samples, rounds=25, seed=0)
        assert ranked[0][0] == "finisher"

    def test_larger_wins_mode(self):
        samples = {
            "high": {("f", 2): [9.0]},
            "low": {("f", 2): [1.0]},
        }
        ranked = glicko2_rank(samples, rounds=25, seed=0, smaller_wins=False)
        assert ranked[0][0] == "high"

    def test_needs_two_algorithms(self):
        with pytest.raises(FewerThanTwoAlgorithms):
            glicko2_rank({"A": {("f", 2): [1.0]}})
