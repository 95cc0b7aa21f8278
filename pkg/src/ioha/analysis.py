"""Shared assembly of tables and curve payloads from a loaded collection.

The command line and the HTTP service both call into this module so that a
given request produces identical numbers (and identical CSV bytes) on either
surface.
"""

from __future__ import annotations

import csv
import io
import math

import numpy as np

from . import stats
from .align import (
    AlignedMatrix,
    AnchorSequence,
    Perspective,
    Scale,
    align_fixed_budget,
    align_fixed_target,
    align_parameter,
    default_budgets,
    default_targets,
    generate_sequence,
    round_budgets,
)
from .compare import Decision, glicko2_rank, pairwise_ks
from .datasets import DataSet, DataSetCollection, Direction
from .errors import InvalidRange, NoMatchingData, UnknownParameter
from .stats import QUANTILE_LABELS, StatRow, default_ecdf_grid
from .tables import TableDocument

STAT_COLUMNS = ["mean", "median", "sd", *QUANTILE_LABELS]


# ---------------------------------------------------------------------------
# Selection and anchors


def select_datasets(
    collection: DataSetCollection, func_id=None, dimension=None, alg_ids=None
) -> list[DataSet]:
    subset = collection.subset(func_id=func_id, dimension=dimension, alg_ids=alg_ids)
    if not len(subset):
        raise NoMatchingData(
            f"no data sets match function={func_id} dimension={dimension} algorithms={alg_ids}"
        )
    return sorted(subset.datasets, key=lambda ds: ds.key)


def resolve_anchors(
    datasets: list[DataSet],
    perspective: Perspective,
    lo: float | None = None,
    hi: float | None = None,
    step: float | None = None,
    count: int | None = None,
    scale: Scale = Scale.AUTO,
) -> AnchorSequence:
    """Anchor sequence from explicit bounds, or the documented defaults:
    10 values across the central quartiles of observed qualities
    (fixed-target) or across the observed evaluation counts (fixed-budget)."""
    if lo is None and hi is None and step is None and count is None:
        if perspective is Perspective.FIXED_TARGET:
            return default_targets(datasets)
        return default_budgets(datasets)
    if lo is None or hi is None:
        raise InvalidRange("min and max must be given together")
    if step is None and count is None:
        count = 10
    seq = generate_sequence(
        lo, hi, step=step, count=count, scale=scale, perspective=perspective
    )
    if perspective is Perspective.FIXED_BUDGET:
        seq = round_budgets(seq)
    return seq


def align(ds: DataSet, anchors: AnchorSequence) -> AlignedMatrix:
    if anchors.perspective is Perspective.FIXED_TARGET:
        return align_fixed_target(ds, anchors)
    return align_fixed_budget(ds, anchors)


# ---------------------------------------------------------------------------
# Tables


def summary_table(collection: DataSetCollection) -> TableDocument:
    rows = []
    for ds in sorted(collection, key=lambda d: d.key):
        maximize = ds.direction is Direction.MAXIMIZE
        finals = ds.final_values
        rows.append(
            [
                ds.alg_id,
                ds.func_id,
                ds.dimension,
                len(ds.runs),
                int(ds.budgets.max()),
                float(finals.max() if maximize else finals.min()),
            ]
        )
    return TableDocument(
        ["algId", "funcId", "DIM", "runs", "budget", "best reached"],
        rows,
        caption="Loaded data sets",
    )


def overview_table(collection: DataSetCollection, func_id, dimension) -> TableDocument:
    rows = [
        [
            r.alg_id,
            r.runs,
            r.worst_recorded,
            r.worst_reached,
            r.best_reached,
            r.mean_reached,
            r.median_reached,
            r.succ,
            r.budget,
        ]
        for r in stats.data_overview(collection, func_id, dimension)
    ]
    return TableDocument(
        [
            "algId",
            "runs",
            "worst recorded",
            "worst reached",
            "best reached",
            "mean reached",
            "median reached",
            "succ",
            "budget",
        ],
        rows,
        caption=f"Function value overview, f{func_id} {dimension}D",
    )


def _stat_row_cells(row: StatRow, fixed_target: bool, with_success: bool) -> list:
    cells = [row.anchor, row.mean, row.median, row.sd, *row.quantiles]
    if fixed_target:
        cells.append(row.ert)
    cells.append(row.runs)
    if with_success:
        cells.append(row.success_count)
    return cells


def stats_table(
    datasets: list[DataSet],
    anchors: AnchorSequence,
    value_target: float | None = None,
) -> TableDocument:
    """Per-anchor descriptive statistics; the algorithm column is added only
    when more than one algorithm is shown."""
    fixed_target = anchors.perspective is Perspective.FIXED_TARGET
    anchor_name = "target" if fixed_target else "budget"
    with_success = fixed_target or value_target is not None
    header = [anchor_name, *STAT_COLUMNS]
    if fixed_target:
        header.append("ERT")
    header.append("runs")
    if with_success:
        header.append("succ")
    multi = len(datasets) > 1
    if multi:
        header = ["algId", *header]
    rows = []
    for ds in datasets:
        for stat_row in stats.summarize(align(ds, anchors), value_target=value_target):
            cells = _stat_row_cells(stat_row, fixed_target, with_success)
            rows.append([ds.alg_id, *cells] if multi else cells)
    return TableDocument(header, rows, caption=f"{anchor_name} statistics")


def stat_rows_payload(
    datasets: list[DataSet],
    anchors: AnchorSequence,
    value_target: float | None = None,
) -> list[dict]:
    fixed_target = anchors.perspective is Perspective.FIXED_TARGET
    anchor_name = "target" if fixed_target else "budget"
    out = []
    for ds in datasets:
        for row in stats.summarize(align(ds, anchors), value_target=value_target):
            entry = {
                "algId": ds.alg_id,
                anchor_name: row.anchor,
                "runs": row.runs,
                "mean": row.mean,
                "median": row.median,
                "sd": row.sd,
            }
            entry.update(dict(zip(QUANTILE_LABELS, row.quantiles)))
            if fixed_target:
                entry["ert"] = row.ert
            if row.success_rate is not None:
                entry["succ"] = row.success_count
                entry["rate"] = row.success_rate
            out.append(entry)
    return out


def samples_table(datasets: list[DataSet], anchors: AnchorSequence, layout: str) -> TableDocument:
    from .tables import export_samples

    docs = [(ds.alg_id, export_samples(align(ds, anchors), layout)) for ds in datasets]
    if len(docs) == 1:
        return docs[0][1]
    header = ["algId", *docs[0][1].header]
    rows = [[alg, *row] for alg, doc in docs for row in doc.rows]
    return TableDocument(header, rows)


def params_table(
    datasets: list[DataSet], anchors: AnchorSequence, params: list[str] | None = None
) -> TableDocument:
    anchor_name = "target" if anchors.perspective is Perspective.FIXED_TARGET else "budget"
    header = ["algId", "param", anchor_name, *STAT_COLUMNS, "runs"]
    rows = []
    for ds in datasets:
        names = params if params is not None else ds.param_names
        for name in names:
            if name not in ds.param_names:
                raise UnknownParameter(name)
            matrix = align_parameter(ds, anchors, name)
            for row in stats.summarize(matrix, value_target=None):
                rows.append(
                    [ds.alg_id, name, row.anchor, row.mean, row.median, row.sd,
                     *row.quantiles, row.runs]
                )
    return TableDocument(header, rows, caption="parameter statistics")


# ---------------------------------------------------------------------------
# ECDF curves, AUC


def parse_target_map(text: str) -> dict[str, list[float]]:
    """Target map from CSV text with columns funcId,target (repeatable)."""
    out: dict[str, list[float]] = {}
    for row in csv.reader(io.StringIO(text)):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) < 2:
            raise InvalidRange(f"target map rows need funcId,target: {row!r}")
        func, target = row[0].strip(), row[1].strip()
        try:
            value = float(target)
        except ValueError:
            if not out:  # header row
                continue
            raise InvalidRange(f"non-numeric target {target!r} for function {func!r}") from None
        out.setdefault(func, []).append(value)
    if not out:
        raise InvalidRange("target map is empty")
    return out


def _targets_sequence(values: list[float]) -> AnchorSequence:
    arr = np.unique(np.asarray(values, dtype=np.float64))
    return AnchorSequence(arr, scale=Scale.LINEAR, perspective=Perspective.FIXED_TARGET)


def ecdf_curves(
    collection: DataSetCollection,
    dimension: int,
    alg_ids: list[str] | None,
    func_id=None,
    targets: AnchorSequence | None = None,
    target_map: dict[str, list[float]] | None = None,
    perspective: Perspective = Perspective.FIXED_TARGET,
) -> tuple[list[stats.EcdfCurve], dict]:
    """Aggregated ECDF per algorithm.

    Fixed-target: runtime ECDFs aggregated over the target set of one
    function (multi-target form) or, with ``target_map``, across every listed
    function (multi-function form). Fixed-budget: the distribution of best
    values aggregated over the budget anchors.
    """
    if perspective is Perspective.FIXED_BUDGET:
        if target_map is not None:
            raise InvalidRange("per-function target maps apply to the fixed-target view only")
        datasets = select_datasets(
            collection, func_id=func_id, dimension=dimension, alg_ids=alg_ids
        )
        if targets is None:
            targets = default_budgets(datasets)
        matrices = {ds.alg_id: align_fixed_budget(ds, targets) for ds in datasets}
        grid = default_ecdf_grid(list(matrices.values()))
        curves = [
            stats.ecdf_targets(matrices[alg], grid, alg_id=alg) for alg in sorted(matrices)
        ]
        meta = {"scope": "multi-budget", "budgets": [float(v) for v in targets.values]}
        return curves, meta

    if target_map is not None:
        funcs = sorted(target_map, key=lambda f: (len(f), f))
        per_alg: dict[str, dict[str, AlignedMatrix]] = {}
        algs = _algs_for(collection, dimension, alg_ids)
        for alg in algs:
            matrices = {}
            for func in funcs:
                ds = collection.get(alg, func, dimension)
                if ds is None:
                    continue
                matrices[func] = align_fixed_target(ds, _targets_sequence(target_map[func]))
            if matrices:
                per_alg[alg] = matrices
        if not per_alg:
            raise NoMatchingData("no data sets match the target map")
        grid = default_ecdf_grid(
            [m for mats in per_alg.values() for m in mats.values()],
            extra=_max_budgets(collection, dimension),
        )
        curves = [
            stats.ecdf_functions(per_alg[alg], grid, alg_id=alg) for alg in sorted(per_alg)
        ]
        meta = {"scope": "multi-function", "targets": {f: sorted(v) for f, v in target_map.items()}}
        return curves, meta

    datasets = select_datasets(collection, func_id=func_id, dimension=dimension, alg_ids=alg_ids)
    if targets is None:
        targets = default_targets(datasets)
    matrices = {ds.alg_id: align_fixed_target(ds, targets) for ds in datasets}
    grid = default_ecdf_grid(list(matrices.values()), extra=_max_budgets(collection, dimension))
    curves = [
        stats.ecdf_targets(matrices[alg], grid, alg_id=alg) for alg in sorted(matrices)
    ]
    meta = {"scope": "multi-target", "targets": [float(v) for v in targets.values]}
    return curves, meta


def _algs_for(collection, dimension, alg_ids):
    subset = collection.subset(dimension=dimension, alg_ids=alg_ids)
    if not len(subset):
        raise NoMatchingData(f"no data in dimension {dimension}")
    return subset.algorithms


def _max_budgets(collection, dimension):
    return [
        int(ds.budgets.max()) for ds in collection if ds.dimension == int(dimension)
    ]


def auc_table(curves: list[stats.EcdfCurve], t_min: float, t_max: float) -> TableDocument:
    rows = [
        [curve.alg_id, stats.ecdf_auc(curve, t_min, t_max)] for curve in curves
    ]
    return TableDocument(["algId", "auc"], rows, caption=f"AUC over [{t_min:g}, {t_max:g}]")


def default_auc_range(curves: list[stats.EcdfCurve]) -> tuple[float, float]:
    hi = max((float(c.grid[-1]) for c in curves if len(c.grid)), default=2.0)
    return 1.0, max(hi, 2.0)


# ---------------------------------------------------------------------------
# Hypothesis testing and ranking


def ks_payload(
    collection: DataSetCollection,
    func_id,
    dimension: int,
    alg_ids: list[str] | None,
    target: float | None = None,
    alpha: float = 0.01,
) -> dict:
    datasets = select_datasets(collection, func_id=func_id, dimension=dimension, alg_ids=alg_ids)
    if target is None:
        target = stats.radar_targets(
            collection.subset(func_id=func_id, alg_ids=alg_ids), dimension
        )[str(func_id)]
    seq = _targets_sequence([target])
    samples = {}
    budgets = {}
    for ds in datasets:
        matrix = align_fixed_target(ds, seq)
        samples[ds.alg_id] = matrix.per_run[:, 0]
        budgets[ds.alg_id] = ds.budgets
    results, graph = pairwise_ks(samples, alpha=alpha, budgets=budgets)

    algs = graph.nodes
    index = {a: i for i, a in enumerate(algs)}
    n = len(algs)
    p_raw = [[None] * n for _ in range(n)]
    p_corr = [[None] * n for _ in range(n)]
    decision = [[0] * n for _ in range(n)]
    for (left, right), res in results.items():
        i, j = index[left], index[right]
        p_raw[i][j] = p_raw[j][i] = res.p_raw
        p_corr[i][j] = p_corr[j][i] = res.p_corrected
        if res.decision is Decision.LEFT_DOMINATES:
            decision[i][j], decision[j][i] = 1, -1
        elif res.decision is Decision.RIGHT_DOMINATES:
            decision[i][j], decision[j][i] = -1, 1
    return {
        "target": float(target),
        "alpha": alpha,
        "pairs": len(results),
        "algorithms": algs,
        "pRaw": p_raw,
        "pCorrected": p_corr,
        "decision": decision,
        "edges": [list(edge) for edge in graph.edges],
    }


def ks_table(payload: dict) -> TableDocument:
    algs = payload["algorithms"]
    rows = []
    for i, alg in enumerate(algs):
        rows.append([alg, *[payload["pCorrected"][i][j] for j in range(len(algs))]])
    return TableDocument(
        ["algId", *algs], rows, caption=f"corrected p-values at target {payload['target']:g}"
    )


def build_rank_samples(
    collection: DataSetCollection,
    dimensions: list[int] | None = None,
    alg_ids: list[str] | None = None,
    perspective: Perspective = Perspective.FIXED_TARGET,
    target_map: dict[str, list[float]] | None = None,
) -> tuple[dict[str, dict], bool]:
    """Per-algorithm game samples keyed by (function, dimension).

    Fixed-target: hitting times at one target per function and dimension
    (the near-best default rule, or the first entry of a supplied target
    map). Fixed-budget: final best values; the winner is decided by the
    optimization direction.
    """
    dims = dimensions if dimensions else collection.dimensions
    samples: dict[str, dict] = {}
    smaller_wins = True
    for dim in dims:
        subset = collection.subset(dimension=dim, alg_ids=alg_ids)
        if not len(subset):
            continue
        if perspective is Perspective.FIXED_TARGET:
            targets = stats.radar_targets(subset, dim)
            if target_map is not None:
                targets = {
                    f: target_map[f][0] for f in targets if f in target_map and target_map[f]
                }
            for ds in subset:
                target = targets.get(ds.func_id)
                if target is None:
                    continue
                matrix = align_fixed_target(ds, _targets_sequence([target]))
                samples.setdefault(ds.alg_id, {})[(ds.func_id, dim)] = matrix.per_run[:, 0]
        else:
            for ds in subset:
                smaller_wins = ds.direction is Direction.MINIMIZE
                samples.setdefault(ds.alg_id, {})[(ds.func_id, dim)] = ds.final_values
    if not samples:
        raise NoMatchingData("no data sets available for ranking")
    return samples, (smaller_wins if perspective is Perspective.FIXED_BUDGET else True)


def rank_table(
    collection: DataSetCollection,
    dimensions: list[int] | None = None,
    alg_ids: list[str] | None = None,
    rounds: int = 25,
    seed: int = 0,
    perspective: Perspective = Perspective.FIXED_TARGET,
    target_map: dict[str, list[float]] | None = None,
) -> TableDocument:
    samples, smaller_wins = build_rank_samples(
        collection, dimensions, alg_ids, perspective, target_map
    )
    ranked = glicko2_rank(samples, rounds=rounds, seed=seed, smaller_wins=smaller_wins)
    rows = [
        [pos + 1, alg, state.rating, state.deviation, state.volatility]
        for pos, (alg, state) in enumerate(ranked)
    ]
    return TableDocument(
        ["rank", "algId", "rating", "deviation", "volatility"],
        rows,
        caption=f"rating-based ranking ({rounds} rounds, seed {seed})",
    )


def radar_payload(collection: DataSetCollection, dimension: int, alg_ids=None) -> dict:
    subset = collection.subset(dimension=dimension, alg_ids=alg_ids)
    if not len(subset):
        raise NoMatchingData(f"no data in dimension {dimension}")
    targets = stats.radar_targets(subset, dimension)
    series = []
    for alg in subset.algorithms:
        erts = {}
        for func, target in targets.items():
            ds = subset.get(alg, func, dimension)
            if ds is None:
                continue
            matrix = align_fixed_target(ds, _targets_sequence([target]))
            erts[func] = stats.ert(matrix.per_run[:, 0], ds.budgets)
        series.append({"algId": alg, "ert": erts})
    return {
        "dimension": int(dimension),
        "targets": {f: float(v) for f, v in targets.items()},
        "series": series,
    }


def stats_payload(
    datasets: list[DataSet], anchors: AnchorSequence, value_target: float | None = None
) -> dict:
    return {
        "perspective": anchors.perspective.value,
        "scale": anchors.scale.value,
        "anchors": [float(v) for v in anchors.values],
        "valueTarget": value_target,
        "rows": stat_rows_payload(datasets, anchors, value_target),
    }


def ecdf_payload(curves: list[stats.EcdfCurve], meta: dict) -> dict:
    return {
        **meta,
        "curves": [
            {
                "algId": c.alg_id,
                "t": [float(x) for x in c.grid],
                "proportion": [float(y) for y in c.proportion],
            }
            for c in curves
        ],
    }


def ecdf_long_table(curves: list[stats.EcdfCurve]) -> TableDocument:
    rows = [
        [c.alg_id, float(t), float(p)]
        for c in curves
        for t, p in zip(c.grid, c.proportion)
    ]
    return TableDocument(["algId", "t", "proportion"], rows, caption="ECDF curves")


# ---------------------------------------------------------------------------
# JSON sanitation


def jsonable(value):
    """Recursively convert payloads to JSON-safe values: inf -> "Inf",
    nan/None -> None, numpy scalars -> Python scalars."""
    if value is None or isinstance(value, (str, bool, int)):
        return value
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "Inf" if x > 0 else "-Inf"
        return x
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {_json_key(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    raise TypeError(f"cannot make {type(value)!r} JSON-safe")


def _json_key(key) -> str:
    if isinstance(key, tuple):
        return "/".join(str(part) for part in key)
    return str(key)
