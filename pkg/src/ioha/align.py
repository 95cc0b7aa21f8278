"""Anchor sequences and run alignment.

Improvement-based traces are step functions; alignment evaluates them at a
grid of anchors without interpolation. Fixed-target alignment yields hitting
times (inf when the target is never reached), fixed-budget alignment yields
best-so-far values (nan below the first record).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .datasets import DataSet, Direction
from .errors import InvalidRange, NonPositiveForLog, UnknownParameter

_SEQ_EPS = 1e-9


class Scale(enum.Enum):
    LINEAR = "linear"
    LOG = "log"
    AUTO = "auto"


class Perspective(enum.Enum):
    FIXED_TARGET = "target"
    FIXED_BUDGET = "budget"


@dataclass(eq=False)
class AnchorSequence:
    values: np.ndarray  # strictly increasing
    scale: Scale
    perspective: Perspective

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if len(self.values) > 1 and np.any(np.diff(self.values) <= 0):
            raise InvalidRange("anchor values must be strictly increasing")
        if self.scale is Scale.LOG and np.any(self.values <= 0):
            raise NonPositiveForLog("log-scale anchors must be positive")

    def __len__(self):
        return len(self.values)


@dataclass(eq=False)
class AlignedMatrix:
    """Runs x anchors grid of hitting times, best values, or parameter values."""

    anchors: AnchorSequence
    per_run: np.ndarray  # shape (runs, anchors); inf = never hit, nan = undefined
    budgets: np.ndarray  # used budget per run
    direction: Direction = Direction.MAXIMIZE

    @property
    def n_runs(self) -> int:
        return self.per_run.shape[0]

    def column(self, j: int) -> np.ndarray:
        return self.per_run[:, j]


def generate_sequence(
    lo: float,
    hi: float,
    *,
    step: float | None = None,
    count: int | None = None,
    scale: Scale = Scale.LINEAR,
    perspective: Perspective = Perspective.FIXED_TARGET,
) -> AnchorSequence:
    """Build an anchor sequence between ``lo`` and ``hi``.

    Exactly one of ``step`` and ``count`` must be given. Step sequences run
    lo, lo+step, ... and append ``hi`` as the final anchor when the
    progression does not land within 1e-9 of it; count sequences are evenly
    spaced including both endpoints. On the log scale spacing is even in
    log10 (the step is in log10 units). AUTO picks log when lo > 0 and
    hi/lo >= 100, linear otherwise.
    """
    if not (lo < hi):
        raise InvalidRange(f"need lo < hi, got [{lo}, {hi}]")
    if (step is None) == (count is None):
        raise InvalidRange("exactly one of step and count is required")
    if step is not None and not step > 0:
        raise InvalidRange(f"step must be positive, got {step}")
    if count is not None and count < 2:
        raise InvalidRange(f"count must be at least 2, got {count}")

    if scale is Scale.AUTO:
        scale = Scale.LOG if lo > 0 and hi / lo >= 100 else Scale.LINEAR
    if scale is Scale.LOG and lo <= 0:
        raise NonPositiveForLog(f"log scale requires positive bounds, got lo={lo}")

    if scale is Scale.LOG:
        a, b = math.log10(lo), math.log10(hi)
        grid = _linear_values(a, b, step, count)
        values = np.power(10.0, grid)
        values[0] = lo
        if abs(grid[-1] - b) <= _SEQ_EPS:
            values[-1] = hi
    else:
        values = _linear_values(lo, hi, step, count)

    values = np.asarray(values, dtype=np.float64)
    keep = np.concatenate(([True], np.diff(values) > 0))
    return AnchorSequence(values[keep], scale=scale, perspective=perspective)


def _linear_values(lo: float, hi: float, step: float | None, count: int | None) -> np.ndarray:
    if count is not None:
        return np.linspace(lo, hi, count)
    span = hi - lo
    n_steps = int(math.floor(span / step + _SEQ_EPS))
    values = lo + step * np.arange(n_steps + 1)
    if hi - values[-1] > _SEQ_EPS:
        values = np.append(values, hi)
    return values


def align_fixed_target(ds: DataSet, targets: AnchorSequence) -> AlignedMatrix:
    """Hitting time of each target per run: evaluation count of the first
    record at least as good as the target, inf when never reached."""
    if targets.perspective is not Perspective.FIXED_TARGET:
        raise InvalidRange("anchor sequence is not a target sequence")
    sign = 1.0 if ds.direction is Direction.MAXIMIZE else -1.0
    grid = sign * targets.values
    out = np.empty((len(ds.runs), len(targets)))
    for i, run in enumerate(ds.runs):
        idx = np.searchsorted(sign * run.best, grid, side="left")
        hit = idx < len(run.evals)
        out[i, hit] = run.evals[idx[hit]]
        out[i, ~hit] = np.inf
    return AlignedMatrix(targets, out, ds.budgets, ds.direction)


def align_fixed_budget(ds: DataSet, budgets: AnchorSequence) -> AlignedMatrix:
    """Best-so-far value at each budget per run: value of the last record
    with at most that many evaluations, nan below the first record."""
    if budgets.perspective is not Perspective.FIXED_BUDGET:
        raise InvalidRange("anchor sequence is not a budget sequence")
    _check_integral_budgets(budgets)
    out = np.empty((len(ds.runs), len(budgets)))
    for i, run in enumerate(ds.runs):
        idx = np.searchsorted(run.evals, budgets.values, side="right") - 1
        defined = idx >= 0
        out[i, defined] = run.best[idx[defined]]
        out[i, ~defined] = np.nan
    return AlignedMatrix(budgets, out, ds.budgets, ds.direction)


def align_parameter(ds: DataSet, anchors: AnchorSequence, param: str) -> AlignedMatrix:
    """Parameter value at the record where each anchor is met.

    Fixed-target anchors use the record that first hits the target;
    fixed-budget anchors use the last record within the budget. Entries are
    nan when the anchor is never met or the parameter was not tracked there.
    """
    if param not in ds.param_names:
        raise UnknownParameter(param)
    sign = 1.0 if ds.direction is Direction.MAXIMIZE else -1.0
    out = np.empty((len(ds.runs), len(anchors)))
    for i, run in enumerate(ds.runs):
        series = run.params.get(param)
        if series is None:
            out[i, :] = np.nan
            continue
        if anchors.perspective is Perspective.FIXED_TARGET:
            idx = np.searchsorted(sign * run.best, sign * anchors.values, side="left")
        else:
            idx = np.searchsorted(run.evals, anchors.values, side="right") - 1
        defined = (idx >= 0) & (idx < len(series))
        out[i, defined] = series[idx[defined]]
        out[i, ~defined] = np.nan
    return AlignedMatrix(anchors, out, ds.budgets, ds.direction)


def _check_integral_budgets(budgets: AnchorSequence) -> None:
    vals = budgets.values
    if np.any(vals < 1) or np.any(vals != np.round(vals)):
        raise InvalidRange("budget anchors must be positive integers")


def round_budgets(seq: AnchorSequence) -> AnchorSequence:
    """Round generated budget anchors to unique positive integers."""
    vals = np.unique(np.maximum(1, np.round(seq.values))).astype(np.float64)
    return AnchorSequence(vals, scale=seq.scale, perspective=Perspective.FIXED_BUDGET)


def default_target_range(datasets: list[DataSet]) -> tuple[float, float]:
    """Default target range: central quartiles of every recorded best-so-far
    value across the given data sets."""
    pooled = np.concatenate([run.best for ds in datasets for run in ds.runs])
    lo, hi = np.quantile(pooled, [0.25, 0.75])
    if lo == hi:
        lo, hi = float(pooled.min()), float(pooled.max())
    return float(lo), float(hi)


def default_targets(datasets: list[DataSet], count: int = 10) -> AnchorSequence:
    lo, hi = default_target_range(datasets)
    if lo == hi:
        return AnchorSequence(
            np.array([lo]), scale=Scale.LINEAR, perspective=Perspective.FIXED_TARGET
        )
    return generate_sequence(lo, hi, count=count, scale=Scale.LINEAR)


def default_budgets(datasets: list[DataSet], count: int = 10) -> AnchorSequence:
    """Default budget anchors span the observed evaluation counts, log-spaced
    when they cover at least two orders of magnitude."""
    lo = min(int(run.evals[0]) for ds in datasets for run in ds.runs)
    hi = max(run.budget for ds in datasets for run in ds.runs)
    if lo >= hi:
        return AnchorSequence(
            np.array([float(hi)]), scale=Scale.LINEAR, perspective=Perspective.FIXED_BUDGET
        )
    seq = generate_sequence(
        lo, hi, count=count, scale=Scale.AUTO, perspective=Perspective.FIXED_BUDGET
    )
    return round_budgets(seq)
