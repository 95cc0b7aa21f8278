"""Statistical comparison of algorithms.

Pairwise two-sample Kolmogorov-Smirnov tests (asymptotic p-values, Bonferroni
corrected over all tested pairs) induce a dominance partial order; a
rating-based ranking plays repeated sampled games between algorithm pairs and
scores them with the Glicko-2 system.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptySample, FewerThanTwoAlgorithms, VolatilitySolverNoConvergence


class Decision(enum.Enum):
    LEFT_DOMINATES = "left"
    RIGHT_DOMINATES = "right"
    NO_DECISION = "none"


@dataclass
class KsResult:
    statistic: float
    p_raw: float
    p_corrected: float
    decision: Decision


@dataclass
class PartialOrderGraph:
    nodes: list[str]
    edges: list[tuple[str, str]]  # (winner, loser)


def _ks_statistic(a_sorted: list[float], b_sorted: list[float]) -> float:
    """Largest gap between the two empirical CDFs over all sample points."""
    na, nb = len(a_sorted), len(b_sorted)
    d = 0.0
    for x in sorted(set(a_sorted).union(b_sorted)):
        fa = bisect.bisect_right(a_sorted, x) / na
        fb = bisect.bisect_right(b_sorted, x) / nb
        gap = abs(fa - fb)
        if gap > d:
            d = gap
    return d


def _kolmogorov_sf(lam: float) -> float:
    """Two-sided asymptotic tail probability 2*sum (-1)^(k-1) exp(-2 k^2 lam^2),
    truncated once terms drop below 1e-10."""
    if lam < 1e-4:
        return 1.0
    total, sign = 0.0, 1.0
    for k in range(1, 100001):
        term = math.exp(-2.0 * k * k * lam * lam)
        if term < 1e-10:
            break
        total += sign * term
        sign = -sign
    return min(1.0, max(0.0, 2.0 * total))


def ks_two_sample(a, b) -> tuple[float, float]:
    """Two-sample KS statistic and asymptotic p-value.

    Infinite entries are legal and sort above every finite value. The
    effective size is na*nb/(na+nb).
    """
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    if not a or not b:
        raise EmptySample("both samples must be non-empty")
    d = _ks_statistic(sorted(a), sorted(b))
    if d == 0.0:
        return 0.0, 1.0
    n_eff = len(a) * len(b) / (len(a) + len(b))
    lam = (math.sqrt(n_eff) + 0.12 + 0.11 / math.sqrt(n_eff)) * d
    return d, _kolmogorov_sf(lam)


def _penalized_mean(sample: np.ndarray, budgets: np.ndarray | None, cap: float) -> float:
    if budgets is not None:
        capped = np.minimum(sample, np.broadcast_to(budgets, sample.shape))
    else:
        capped = np.minimum(sample, cap)
    return float(np.mean(capped))


def pairwise_ks(
    alg_samples: dict[str, object],
    alpha: float = 0.01,
    budgets: dict[str, object] | None = None,
    smaller_wins: bool = True,
) -> tuple[dict[tuple[str, str], KsResult], PartialOrderGraph]:
    """Test every unordered algorithm pair at significance level ``alpha``.

    p-values are Bonferroni-corrected by the number of tested pairs. For
    significant pairs the arrow points from the algorithm with the better
    penalized mean (failures count as the used budget) to the worse one.
    """
    algs = sorted(alg_samples)
    if len(algs) < 2:
        raise FewerThanTwoAlgorithms("need at least two algorithms to compare")
    samples = {k: np.asarray(alg_samples[k], dtype=np.float64) for k in algs}
    finite_all = np.concatenate([s[np.isfinite(s)] for s in samples.values()])
    cap = float(finite_all.max()) if len(finite_all) else 1.0

    m = len(algs) * (len(algs) - 1) // 2
    results: dict[tuple[str, str], KsResult] = {}
    edges = []
    for i, left in enumerate(algs):
        for right in algs[i + 1 :]:
            d, p_raw = ks_two_sample(samples[left], samples[right])
            p_corr = min(1.0, m * p_raw)
            decision = Decision.NO_DECISION
            if p_corr < alpha:
                mean_l = _penalized_mean(
                    samples[left], None if budgets is None else np.asarray(budgets[left]), cap
                )
                mean_r = _penalized_mean(
                    samples[right], None if budgets is None else np.asarray(budgets[right]), cap
                )
                if not smaller_wins:
                    mean_l, mean_r = -mean_l, -mean_r
                if mean_l < mean_r:
                    decision = Decision.LEFT_DOMINATES
                    edges.append((left, right))
                elif mean_r < mean_l:
                    decision = Decision.RIGHT_DOMINATES
                    edges.append((right, left))
            results[(left, right)] = KsResult(d, p_raw, p_corr, decision)
    return results, PartialOrderGraph(algs, edges)


# ---------------------------------------------------------------------------
# Glicko-2 rating


GLICKO2_SCALE = 173.7178
INITIAL_RATING = 1500.0
INITIAL_DEVIATION = 350.0
INITIAL_VOLATILITY = 0.06
_VOLATILITY_TOLERANCE = 1e-6
_MAX_VOLATILITY_ITERATIONS = 100


@dataclass(frozen=True)
class GlickoState:
    rating: float = INITIAL_RATING
    deviation: float = INITIAL_DEVIATION
    volatility: float = INITIAL_VOLATILITY


def _g(phi: float) -> float:
    return 1.0 / math.sqrt(1.0 + 3.0 * phi * phi / (math.pi * math.pi))


def _expected(mu: float, mu_j: float, phi_j: float) -> float:
    return 1.0 / (1.0 + math.exp(-_g(phi_j) * (mu - mu_j)))


def _solve_volatility(sigma: float, phi: float, v: float, delta: float, tau: float) -> float:
    """Regula-falsi (Illinois) iteration for the new volatility."""
    a = math.log(sigma * sigma)
    phi_sq = phi * phi

    def f(x: float) -> float:
        ex = math.exp(x)
        num = ex * (delta * delta - phi_sq - v - ex)
        den = 2.0 * (phi_sq + v + ex) ** 2
        return num / den - (x - a) / (tau * tau)

    big_a = a
    if delta * delta > phi_sq + v:
        big_b = math.log(delta * delta - phi_sq - v)
    else:
        k = 1
        while f(a - k * tau) < 0:
            k += 1
        big_b = a - k * tau

    f_a, f_b = f(big_a), f(big_b)
    for _ in range(_MAX_VOLATILITY_ITERATIONS):
        if abs(big_b - big_a) <= _VOLATILITY_TOLERANCE:
            return math.exp(big_a / 2.0)
        big_c = big_a + (big_a - big_b) * f_a / (f_b - f_a)
        f_c = f(big_c)
        if f_c * f_b <= 0:
            big_a, f_a = big_b, f_b
        else:
            f_a /= 2.0
        big_b, f_b = big_c, f_c
    raise VolatilitySolverNoConvergence(
        f"volatility iteration did not converge in {_MAX_VOLATILITY_ITERATIONS} steps"
    )


def glicko2_game_update(
    player: GlickoState,
    opponents: list[tuple[GlickoState, float]],
    tau: float = 0.5,
) -> GlickoState:
    """One rating-period update against a list of (opponent, score) games.

    Scores are 1 (win), 0.5 (draw), 0 (loss). With no games the rating and
    volatility stay put and only the deviation inflates.
    """
    mu = (player.rating - INITIAL_RATING) / GLICKO2_SCALE
    phi = player.deviation / GLICKO2_SCALE
    sigma = player.volatility

    if not opponents:
        phi_star = math.sqrt(phi * phi + sigma * sigma)
        return GlickoState(player.rating, phi_star * GLICKO2_SCALE, sigma)

    games = [
        ((opp.rating - INITIAL_RATING) / GLICKO2_SCALE, opp.deviation / GLICKO2_SCALE, score)
        for opp, score in opponents
    ]
    v_inv = sum(
        _g(phi_j) ** 2 * _expected(mu, mu_j, phi_j) * (1.0 - _expected(mu, mu_j, phi_j))
        for mu_j, phi_j, _ in games
    )
    v = 1.0 / v_inv
    improvement_sum = sum(
        _g(phi_j) * (score - _expected(mu, mu_j, phi_j)) for mu_j, phi_j, score in games
    )
    delta = v * improvement_sum

    sigma_new = _solve_volatility(sigma, phi, v, delta, tau)
    phi_star = math.sqrt(phi * phi + sigma_new * sigma_new)
    phi_new = 1.0 / math.sqrt(1.0 / (phi_star * phi_star) + 1.0 / v)
    mu_new = mu + phi_new * phi_new * improvement_sum

    return GlickoState(
        rating=mu_new * GLICKO2_SCALE + INITIAL_RATING,
        deviation=phi_new * GLICKO2_SCALE,
        volatility=sigma_new,
    )


def glicko2_rank(
    alg_samples: dict[str, dict],
    rounds: int = 25,
    seed: int = 0,
    smaller_wins: bool = True,
    tau: float = 0.5,
) -> list[tuple[str, GlickoState]]:
    """Rank algorithms by repeated sampled games.

    ``alg_samples`` maps algorithm id -> {group key -> sample array}; group
    keys are typically (function, dimension) pairs. Each round draws, per
    group and per algorithm pair, one value from each sample (uniformly with
    replacement); the better value wins, equal draws score 0.5, and an
    infinite draw loses to a finite one. One round is one rating period.
    """
    algs = sorted(alg_samples)
    if len(algs) < 2:
        raise FewerThanTwoAlgorithms("need at least two algorithms to rank")
    if rounds < 1:
        raise ValueError("rounds must be at least 1")
    samples = {
        alg: {key: np.asarray(vals, dtype=np.float64) for key, vals in groups.items()}
        for alg, groups in alg_samples.items()
    }
    rng = np.random.default_rng(seed)
    states = {alg: GlickoState() for alg in algs}

    for _ in range(rounds):
        games: dict[str, list[tuple[GlickoState, float]]] = {alg: [] for alg in algs}
        for i, left in enumerate(algs):
            for right in algs[i + 1 :]:
                shared = sorted(set(samples[left]).intersection(samples[right]))
                for key in shared:
                    xs, ys = samples[left][key], samples[right][key]
                    x = float(xs[rng.integers(len(xs))])
                    y = float(ys[rng.integers(len(ys))])
                    score = _game_score(x, y, smaller_wins)
                    games[left].append((states[right], score))
                    games[right].append((states[left], 1.0 - score))
        states = {
            alg: glicko2_game_update(states[alg], games[alg], tau=tau) for alg in algs
        }
    return sorted(states.items(), key=lambda kv: (-kv[1].rating, kv[0]))


def _game_score(x: float, y: float, smaller_wins: bool) -> float:
    if x == y:
        return 0.5
    if math.isinf(x) and not math.isinf(y):
        return 0.0
    if math.isinf(y) and not math.isinf(x):
        return 1.0
    better = x < y if smaller_wins else x > y
    return 1.0 if better else 0.0
