"""Performance analysis for iterative optimization heuristics.

Parses benchmark trace archives, aligns improvement traces on target or
budget grids, computes runtime and value statistics (penalized means,
restart-based expected running times, quantiles, ECDFs, densities), compares
algorithms (pairwise KS tests, rating-based ranking), and exposes everything
through a CLI and an HTTP service.
"""

from .align import (
    AlignedMatrix,
    AnchorSequence,
    Perspective,
    Scale,
    align_fixed_budget,
    align_fixed_target,
    align_parameter,
    generate_sequence,
)
from .compare import (
    Decision,
    GlickoState,
    KsResult,
    PartialOrderGraph,
    glicko2_game_update,
    glicko2_rank,
    ks_two_sample,
    pairwise_ks,
)
from .datasets import (
    DataSet,
    DataSetCollection,
    Direction,
    MetaEntry,
    TraceRun,
    detect_direction,
    load_experiment,
    parse_info,
    parse_raw,
    serialize_info,
    serialize_raw,
    write_collection,
    write_dataset,
)
from .stats import (
    DensityEstimate,
    EcdfCurve,
    OverviewRow,
    StatRow,
    data_overview,
    ecdf_auc,
    ecdf_functions,
    ecdf_single,
    ecdf_targets,
    ert,
    fd_bins,
    kde,
    par_c,
    radar_targets,
    success_rate,
    summarize,
)
from .tables import TableDocument, export_samples, export_table

__version__ = "0.1.0"

__all__ = [
    "AlignedMatrix",
    "AnchorSequence",
    "DataSet",
    "DataSetCollection",
    "Decision",
    "DensityEstimate",
    "Direction",
    "EcdfCurve",
    "GlickoState",
    "KsResult",
    "MetaEntry",
    "OverviewRow",
    "PartialOrderGraph",
    "Perspective",
    "Scale",
    "StatRow",
    "TableDocument",
    "TraceRun",
    "align_fixed_budget",
    "align_fixed_target",
    "align_parameter",
    "data_overview",
    "detect_direction",
    "ecdf_auc",
    "ecdf_functions",
    "ecdf_single",
    "ecdf_targets",
    "ert",
    "export_samples",
    "export_table",
    "fd_bins",
    "generate_sequence",
    "glicko2_game_update",
    "glicko2_rank",
    "kde",
    "ks_two_sample",
    "load_experiment",
    "pairwise_ks",
    "par_c",
    "parse_info",
    "parse_raw",
    "radar_targets",
    "serialize_info",
    "serialize_raw",
    "success_rate",
    "summarize",
    "write_collection",
    "write_dataset",
]
