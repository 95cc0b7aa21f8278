"""Descriptive and distributional statistics over aligned matrices.

Fixed-target statistics treat hitting times as the sample (inf marks a
failed run); fixed-budget statistics treat best-so-far values as the sample
(nan marks an undefined entry). Quantiles everywhere use linear
interpolation between order statistics at h = (n-1)p + 1, which is also the
estimator behind the interquartile ranges used for histogram bin widths and
kernel bandwidths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .align import AlignedMatrix, Perspective
from .datasets import DataSetCollection, Direction
from .errors import DegenerateRange, NoMatchingData, TooFewPoints

QUANTILE_LEVELS = (0.02, 0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95, 0.98)
QUANTILE_LABELS = tuple(f"Q{int(round(p * 100))}%" for p in QUANTILE_LEVELS)


def quantile(sample, p) -> float | np.ndarray:
    """Interpolated order statistic at h = (n-1)p + 1 (numpy's default)."""
    return np.quantile(np.asarray(sample, dtype=np.float64), p)


# ---------------------------------------------------------------------------
# Runtime aggregates


def success_rate(times) -> tuple[float, int]:
    """Fraction and number of runs that hit the target (finite hitting time)."""
    times = np.asarray(times, dtype=np.float64)
    count = int(np.isfinite(times).sum())
    return count / len(times), count


def par_c(times, budgets, c: float = 1.0) -> float:
    """Penalized average runtime: failures count as c times the used budget."""
    if c < 1:
        raise ValueError(f"penalty factor must be at least 1, got {c}")
    times = np.asarray(times, dtype=np.float64)
    budgets = np.broadcast_to(np.asarray(budgets, dtype=np.float64), times.shape)
    return float(np.mean(np.minimum(times, c * budgets)))


def ert(times, budgets) -> float:
    """Expected running time under independent restarts.

    Sum of capped running times divided by the number of successes; inf when
    every run failed.
    """
    times = np.asarray(times, dtype=np.float64)
    budgets = np.broadcast_to(np.asarray(budgets, dtype=np.float64), times.shape)
    successes = int(np.isfinite(times).sum())
    if successes == 0:
        return math.inf
    return float(np.minimum(times, budgets).sum() / successes)


# ---------------------------------------------------------------------------
# Per-anchor summary rows


@dataclass
class StatRow:
    anchor: float
    runs: int
    mean: float
    median: float
    sd: float
    quantiles: tuple[float, ...]  # QUANTILE_LEVELS order
    success_count: int | None = None
    success_rate: float | None = None
    ert: float | None = None


def _moments(sample: np.ndarray) -> tuple[float, float, tuple[float, ...]]:
    """(median, sd, quantiles) of a finite sample; nan-filled when empty."""
    if len(sample) == 0:
        nan = float("nan")
        return nan, nan, tuple([nan] * len(QUANTILE_LEVELS))
    med = float(np.median(sample))
    sd = float(np.std(sample, ddof=1)) if len(sample) > 1 else float("nan")
    qs = tuple(float(q) for q in np.quantile(sample, QUANTILE_LEVELS))
    return med, sd, qs


def summarize(aligned: AlignedMatrix, value_target: float | None = None) -> list[StatRow]:
    """One StatRow per anchor.

    Fixed-target: the mean is the penalized average runtime (failures count
    as the used budget), median/sd/quantiles cover successful runs only, and
    ERT/success rate incorporate failures. Fixed-budget: plain moments of the
    defined values; success fields only when a value target is given.
    """
    rows = []
    fixed_target = aligned.anchors.perspective is Perspective.FIXED_TARGET
    maximize = aligned.direction is Direction.MAXIMIZE
    for j, anchor in enumerate(aligned.anchors.values):
        col = aligned.column(j)
        if fixed_target:
            finite = col[np.isfinite(col)]
            rate, count = success_rate(col)
            med, sd, qs = _moments(finite)
            rows.append(
                StatRow(
                    anchor=float(anchor),
                    runs=len(col),
                    mean=par_c(col, aligned.budgets, 1.0),
                    median=med,
                    sd=sd,
                    quantiles=qs,
                    success_count=count,
                    success_rate=rate,
                    ert=ert(col, aligned.budgets),
                )
            )
        else:
            defined = col[~np.isnan(col)]
            med, sd, qs = _moments(defined)
            count = rate = None
            if value_target is not None and len(col):
                hits = (defined >= value_target) if maximize else (defined <= value_target)
                count = int(hits.sum())
                rate = count / len(col)
            rows.append(
                StatRow(
                    anchor=float(anchor),
                    runs=len(col),
                    mean=float(defined.mean()) if len(defined) else float("nan"),
                    median=med,
                    sd=sd,
                    quantiles=qs,
                    success_count=count,
                    success_rate=rate,
                    ert=None,
                )
            )
    return rows


# ---------------------------------------------------------------------------
# Data overview


@dataclass
class OverviewRow:
    alg_id: str
    runs: int
    worst_recorded: float
    worst_reached: float
    best_reached: float
    mean_reached: float
    median_reached: float
    succ: int  # runs attaining the best-reached value
    budget: int  # largest used budget


def data_overview(
    collection: DataSetCollection, func_id, dimension
) -> list[OverviewRow]:
    """Range of observed function values per algorithm on one function."""
    subset = collection.subset(func_id=func_id, dimension=dimension)
    if not len(subset):
        raise NoMatchingData(f"no data for function {func_id} in dimension {dimension}")
    rows = []
    for ds in sorted(subset, key=lambda d: d.alg_id):
        maximize = ds.direction is Direction.MAXIMIZE
        finals = ds.final_values
        recorded = np.concatenate([run.best for run in ds.runs])
        best = finals.max() if maximize else finals.min()
        rows.append(
            OverviewRow(
                alg_id=ds.alg_id,
                runs=len(ds.runs),
                worst_recorded=float(recorded.min() if maximize else recorded.max()),
                worst_reached=float(finals.min() if maximize else finals.max()),
                best_reached=float(best),
                mean_reached=float(finals.mean()),
                median_reached=float(np.median(finals)),
                succ=int((finals == best).sum()),
                budget=int(ds.budgets.max()),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Empirical cumulative distribution functions


@dataclass(eq=False)
class EcdfCurve:
    grid: np.ndarray
    proportion: np.ndarray
    alg_id: str = ""
    scope: str = "single-target"  # single-target | multi-target | multi-function
    targets: object = None


def _hit_fraction(values: np.ndarray, grid: np.ndarray) -> np.ndarray:
    flat = np.sort(values[~np.isnan(values)].ravel())
    total = values[~np.isnan(values)].size
    if total == 0:
        return np.zeros_like(grid)
    return np.searchsorted(flat, grid, side="right") / total


def ecdf_single(times, grid, alg_id: str = "") -> EcdfCurve:
    """Fraction of runs with hitting time at most t, per grid point."""
    times = np.asarray(times, dtype=np.float64)
    grid = np.asarray(grid, dtype=np.float64)
    return EcdfCurve(grid, _hit_fraction(times, grid), alg_id, scope="single-target")


def ecdf_targets(aligned: AlignedMatrix, grid, alg_id: str = "") -> EcdfCurve:
    """Aggregation over the matrix's anchor set: fraction of (run, anchor)
    pairs at or below each grid point. Over a fixed-target matrix this counts
    hits within a budget and equals the pointwise mean of the per-target
    curves; over a fixed-budget matrix it is the value distribution, with
    undefined entries excluded."""
    grid = np.asarray(grid, dtype=np.float64)
    prop = _hit_fraction(aligned.per_run, grid)
    fixed_target = aligned.anchors.perspective is Perspective.FIXED_TARGET
    return EcdfCurve(
        grid,
        prop,
        alg_id,
        scope="multi-target" if fixed_target else "multi-budget",
        targets=list(aligned.anchors.values),
    )


def ecdf_functions(
    aligned_per_function: dict[str, AlignedMatrix], grid, alg_id: str = ""
) -> EcdfCurve:
    """Aggregation across functions: fraction of (function, target, run)
    triples hit within t, each function contributing runs x targets triples."""
    grid = np.asarray(grid, dtype=np.float64)
    hits = np.zeros_like(grid)
    total = 0
    for matrix in aligned_per_function.values():
        entries = matrix.per_run[~np.isnan(matrix.per_run)]
        hits += np.searchsorted(np.sort(entries.ravel()), grid, side="right")
        total += entries.size
    prop = hits / total if total else np.zeros_like(grid)
    targets = {f: list(m.anchors.values) for f, m in aligned_per_function.items()}
    return EcdfCurve(grid, prop, alg_id, scope="multi-function", targets=targets)


def default_ecdf_grid(matrices: list[AlignedMatrix], extra=()) -> np.ndarray:
    """Sorted union of all finite hitting times plus any extra budgets."""
    pools = [m.per_run[np.isfinite(m.per_run)].ravel() for m in matrices]
    pools.append(np.asarray(list(extra), dtype=np.float64))
    grid = np.unique(np.concatenate(pools))
    return grid


def ecdf_auc(curve: EcdfCurve, t_min: float, t_max: float) -> float:
    """Normalized area under the curve on a log10 abscissa over [t_min, t_max].

    The curve is a right-continuous step function; it is evaluated at its own
    grid points inside the range plus both endpoints, then integrated by the
    trapezoid rule in log10(t).
    """
    if not (1 <= t_min < t_max):
        raise DegenerateRange(f"need 1 <= t_min < t_max, got [{t_min}, {t_max}]")
    inside = curve.grid[(curve.grid > t_min) & (curve.grid < t_max)]
    xs = np.concatenate(([t_min], inside, [t_max]))
    idx = np.searchsorted(curve.grid, xs, side="right") - 1
    ys = np.where(idx >= 0, curve.proportion[np.maximum(idx, 0)], 0.0)
    logx = np.log10(xs)
    area = float(np.trapezoid(ys, logx))
    return area / (math.log10(t_max) - math.log10(t_min))


# ---------------------------------------------------------------------------
# Histograms and densities


def fd_bins(sample) -> tuple[float, np.ndarray]:
    """Histogram bin width by the interquartile-range rule 2*IQR*n^(-1/3).

    Falls back to ceil(log2 n) + 1 equal bins when the IQR is zero.
    """
    sample = np.asarray(sample, dtype=np.float64)
    sample = sample[np.isfinite(sample)]
    if len(sample) < 2:
        raise TooFewPoints("need at least 2 finite values for binning")
    lo, hi = float(sample.min()), float(sample.max())
    q25, q75 = np.quantile(sample, [0.25, 0.75])
    iqr = float(q75 - q25)
    if iqr > 0:
        width = 2.0 * iqr * len(sample) ** (-1.0 / 3.0)
        n_bins = max(1, int(math.ceil((hi - lo) / width - 1e-12))) if hi > lo else 1
    else:
        n_bins = int(math.ceil(math.log2(len(sample)))) + 1
        width = (hi - lo) / n_bins if hi > lo else 1.0
    edges = lo + width * np.arange(n_bins + 1)
    return width, edges


@dataclass(eq=False)
class DensityEstimate:
    support: np.ndarray
    density: np.ndarray
    bandwidth: float


def silverman_bandwidth(sample) -> float:
    """0.9 * min(sd, IQR/1.34) * n^(-1/5)."""
    sample = np.asarray(sample, dtype=np.float64)
    sd = float(np.std(sample, ddof=1))
    q25, q75 = np.quantile(sample, [0.25, 0.75])
    spread = min(sd, float(q75 - q25) / 1.34)
    return 0.9 * spread * len(sample) ** (-1.0 / 5.0)


def kde(sample, grid=None, bandwidth: float | None = None) -> DensityEstimate:
    """Gaussian-kernel density estimate of a sample, failures excluded.

    The bandwidth defaults to Silverman's rule; a degenerate sample (zero
    spread) needs an explicit bandwidth. Without a grid the density is
    evaluated on 512 points spanning the data plus three bandwidths.
    """
    sample = np.asarray(sample, dtype=np.float64)
    sample = sample[np.isfinite(sample)]
    if len(sample) < 2:
        raise TooFewPoints("need at least 2 finite values for a density estimate")
    if bandwidth is None:
        bandwidth = silverman_bandwidth(sample)
        if bandwidth <= 0:
            raise TooFewPoints(
                "sample has zero spread; pass an explicit bandwidth"
            )
    if grid is None:
        grid = np.linspace(
            sample.min() - 3 * bandwidth, sample.max() + 3 * bandwidth, 512
        )
    grid = np.asarray(grid, dtype=np.float64)
    z = (grid[:, None] - sample[None, :]) / bandwidth
    dens = np.exp(-0.5 * z * z).sum(axis=1) / (len(sample) * bandwidth * math.sqrt(2 * math.pi))
    return DensityEstimate(grid, dens, bandwidth)


# ---------------------------------------------------------------------------
# Multi-function target selection


def radar_targets(collection: DataSetCollection, dimension: int) -> dict[str, float]:
    """Default per-function target: hardest of the per-algorithm near-best
    final values.

    Per algorithm the 2% quantile of final best values (98% when minimizing);
    per function the max over algorithms (min when minimizing).
    """
    subset = collection.subset(dimension=dimension)
    if not len(subset):
        raise NoMatchingData(f"no data in dimension {dimension}")
    out: dict[str, float] = {}
    for func_id in subset.functions:
        per_alg = []
        maximize = True
        for ds in subset.subset(func_id=func_id):
            maximize = ds.direction is Direction.MAXIMIZE
            level = 0.02 if maximize else 0.98
            per_alg.append(float(np.quantile(ds.final_values, level)))
        out[func_id] = max(per_alg) if maximize else min(per_alg)
    return out
