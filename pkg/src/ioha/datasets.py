"""Trace-archive parsing: meta-data (.info) files, raw run logs, experiment trees.

Two input dialects are understood: the full multi-column log format (run
separator lines starting with ``"function evaluation"``, best-so-far column,
optional current-value and parameter columns) and the minimal two-column
variant of the same structure. Archives (.zip, .tar[.gz|.bz2|.xz]) are
extracted to a temporary directory before loading.
"""

from __future__ import annotations

import enum
import math
import re
import shutil
import tarfile
import tempfile
import warnings
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DataFormatWarning,
    EmptyArchive,
    EmptyFile,
    MalformedInstanceToken,
    MissingMandatoryKey,
    MissingRawFile,
    MixedMonotonicity,
    NonNumericMandatoryField,
    NoSeparatorLine,
    ParseError,
)

EVALS_COLUMN = "function evaluation"
BEST_COLUMN = "best-so-far f(x)"
CURRENT_COLUMN = "current f(x)"

_MANDATORY_META_KEYS = ("funcId", "DIM", "algId")
_HEADER_LINE_RE = re.compile(r"^\s*[A-Za-z_][A-Za-z0-9_.\-]*\s*=")
_INSTANCE_TOKEN_RE = re.compile(r"^([+-]?\d+):([^|]+)\|(.+)$")
_QUOTED_OR_BARE_RE = re.compile(r'"([^"]*)"|(\S+)')


class Direction(enum.Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


@dataclass(eq=False)
class MetaEntry:
    """One three-line block of a meta-data file."""

    func_id: str
    dimension: int
    alg_id: str
    data_path: str
    instances: list[tuple[int, int, float]]  # (instance id, used budget, best value)
    suite: str | None = None
    comment: str | None = None  # verbatim comment line, '%' prefix included
    extra: dict[str, str] = field(default_factory=dict)


@dataclass(eq=False)
class TraceRun:
    """One independent run: improvement records plus tracked parameters."""

    evals: np.ndarray  # int64, strictly increasing
    best: np.ndarray  # float64 best-so-far values
    instance: int = 1
    current: np.ndarray | None = None
    params: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.evals = np.asarray(self.evals, dtype=np.int64)
        self.best = np.asarray(self.best, dtype=np.float64)
        if self.current is not None:
            self.current = np.asarray(self.current, dtype=np.float64)
        self.params = {k: np.asarray(v, dtype=np.float64) for k, v in self.params.items()}
        if len(self.evals) != len(self.best):
            raise ValueError("evals and best must have equal length")
        if len(self.evals) and np.any(np.diff(self.evals) <= 0):
            raise ParseError("evaluation counts not strictly increasing within a run")

    @property
    def budget(self) -> int:
        """Used budget: evaluation count of the final record."""
        return int(self.evals[-1])

    @property
    def final_value(self) -> float:
        return float(self.best[-1])


@dataclass(eq=False)
class DataSet:
    """All runs of one algorithm on one (function, dimension) pair."""

    alg_id: str
    func_id: str
    dimension: int
    direction: Direction
    runs: list[TraceRun]

    def __post_init__(self):
        if not self.runs:
            raise ValueError("a data set needs at least one run")

    @property
    def param_names(self) -> list[str]:
        names: list[str] = []
        for run in self.runs:
            for name in run.params:
                if name not in names:
                    names.append(name)
        return names

    @property
    def budgets(self) -> np.ndarray:
        return np.array([run.budget for run in self.runs], dtype=np.int64)

    @property
    def final_values(self) -> np.ndarray:
        return np.array([run.final_value for run in self.runs])

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.alg_id, self.func_id, self.dimension)


@dataclass(eq=False)
class DataSetCollection:
    datasets: list[DataSet] = field(default_factory=list)

    def __iter__(self):
        return iter(self.datasets)

    def __len__(self):
        return len(self.datasets)

    def get(self, alg_id: str, func_id: str, dimension: int) -> DataSet | None:
        for ds in self.datasets:
            if ds.key == (alg_id, str(func_id), int(dimension)):
                return ds
        return None

    def subset(self, func_id=None, dimension=None, alg_ids=None) -> "DataSetCollection":
        picked = []
        for ds in self.datasets:
            if func_id is not None and ds.func_id != str(func_id):
                continue
            if dimension is not None and ds.dimension != int(dimension):
                continue
            if alg_ids is not None and ds.alg_id not in alg_ids:
                continue
            picked.append(ds)
        return DataSetCollection(picked)

    @property
    def algorithms(self) -> list[str]:
        return sorted({ds.alg_id for ds in self.datasets})

    @property
    def functions(self) -> list[str]:
        return sorted({ds.func_id for ds in self.datasets}, key=_func_sort_key)

    @property
    def dimensions(self) -> list[int]:
        return sorted({ds.dimension for ds in self.datasets})


def _func_sort_key(func_id: str):
    return (0, int(func_id), "") if func_id.isdigit() else (1, 0, func_id)


# ---------------------------------------------------------------------------
# Meta-data (.info) parsing


def _split_outside_quotes(text: str, sep: str = ",") -> list[str]:
    parts, buf, quote = [], [], None
    for ch in text:
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = None
        elif ch in ("'", '"'):
            buf.append(ch)
            quote = ch
        elif ch == sep:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf))
    return parts


def _unquote(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in ("'", '"'):
        return value[1:-1]
    return value


def _parse_header_pairs(line: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for chunk in _split_outside_quotes(line):
        if not chunk.strip():
            continue
        if "=" not in chunk:
            raise ParseError(f"expected name = value pair, got {chunk.strip()!r}")
        name, value = chunk.split("=", 1)
        pairs[name.strip()] = _unquote(value)
    return pairs


def _parse_instance_token(token: str) -> tuple[int, int, float]:
    m = _INSTANCE_TOKEN_RE.match(token.strip())
    if not m:
        raise MalformedInstanceToken(token)
    inst_text, budget_text, best_text = m.groups()
    try:
        instance = int(inst_text)
        budget = int(float(budget_text))
        best = float(best_text)
    except ValueError:
        raise MalformedInstanceToken(token, "non-numeric field") from None
    if budget != float(budget_text) or budget < 1:
        raise MalformedInstanceToken(token, "used budget must be a positive integer")
    return instance, budget, best


def parse_info(text: str) -> list[MetaEntry]:
    """Parse the content of one meta-data (.info) file into its blocks.

    Each block is a header line of comma-separated ``name = value`` pairs
    (``funcId``, ``DIM`` and ``algId`` are case-sensitive and mandatory),
    an optional comment line starting with ``%`` (kept verbatim), and a data
    line holding the relative raw-file path followed by one
    ``instance:budget|best`` token per run. Data lines may wrap over several
    physical lines.
    """
    if not text.strip():
        raise EmptyFile("meta-data file is empty")

    blocks: list[dict] = []
    current: dict | None = None
    for raw_line in text.splitlines():
        line = raw_line.rstrip()
        if not line.strip():
            continue
        if _HEADER_LINE_RE.match(line):
            current = {"header": line, "comment": None, "data": []}
            blocks.append(current)
        elif line.lstrip().startswith("%"):
            if current is None:
                raise ParseError("comment line before any meta-data header")
            if current["comment"] is None:
                current["comment"] = line
            else:
                current["comment"] += "\n" + line
        else:
            if current is None:
                raise ParseError("data line before any meta-data header")
            current["data"].append(line.strip())

    entries = []
    for block in blocks:
        pairs = _parse_header_pairs(block["header"])
        for key in _MANDATORY_META_KEYS:
            if key not in pairs:
                raise MissingMandatoryKey(key)
        try:
            dimension = int(pairs["DIM"])
        except ValueError:
            raise ParseError(f"DIM must be an integer, got {pairs['DIM']!r}") from None
        if dimension < 1:
            raise ParseError(f"DIM must be positive, got {dimension}")
        if not block["data"]:
            raise ParseError("meta-data block has no data line")

        data_text = " ".join(block["data"])
        fields = _split_outside_quotes(data_text)
        data_path = fields[0].strip()
        tokens = [tok for tok in (f.strip() for f in fields[1:]) if tok]
        if not tokens:
            raise ParseError(f"no instance tokens after data path {data_path!r}")
        instances = [_parse_instance_token(tok) for tok in tokens]

        known = {"funcId", "DIM", "algId", "suite"}
        entries.append(
            MetaEntry(
                func_id=pairs["funcId"],
                dimension=dimension,
                alg_id=pairs["algId"],
                data_path=data_path,
                instances=instances,
                suite=pairs.get("suite"),
                comment=block["comment"],
                extra={k: v for k, v in pairs.items() if k not in known},
            )
        )
    return entries


# ---------------------------------------------------------------------------
# Raw-data parsing


def _split_columns(line: str) -> list[str]:
    """Header tokens are double-quoted and may contain spaces."""
    return [q if q else b for q, b in _QUOTED_OR_BARE_RE.findall(line)]


def _to_int64(token: str) -> int:
    value = float(token)
    if not value.is_integer():
        raise ValueError(f"not an integer: {token!r}")
    if not (np.iinfo(np.int64).min <= value <= np.iinfo(np.int64).max):
        raise ParseError(f"evaluation count out of 64-bit integer range: {token!r}")
    return int(value)


def parse_raw(text: str) -> list[TraceRun]:
    """Parse a raw log file into runs.

    Separator lines (starting with ``"function evaluation"``) carry the column
    names and delimit independent runs. The evaluation-count and best-so-far
    columns are mandatory; a current-value column is kept when present; every
    other column becomes a named parameter. Rows whose token count does not
    match the header are dropped with a warning.
    """
    lines = text.splitlines()
    sep_indices = [
        i for i, line in enumerate(lines) if line.lstrip().startswith(f'"{EVALS_COLUMN}"')
    ]
    if not sep_indices:
        raise NoSeparatorLine("no separator line starting with the evaluation-count column")

    runs: list[TraceRun] = []
    bounds = sep_indices + [len(lines)]
    for sep_idx, end in zip(sep_indices, bounds[1:]):
        columns = _split_columns(lines[sep_idx])
        if BEST_COLUMN not in columns:
            raise ParseError(f"mandatory column {BEST_COLUMN!r} missing from separator line")
        evals_col = columns.index(EVALS_COLUMN)
        best_col = columns.index(BEST_COLUMN)
        current_col = columns.index(CURRENT_COLUMN) if CURRENT_COLUMN in columns else None
        param_cols = [
            (j, name)
            for j, name in enumerate(columns)
            if j not in (evals_col, best_col, current_col)
        ]

        evals, best, current = [], [], []
        params: dict[str, list[float]] = {name: [] for _, name in param_cols}
        for line in lines[sep_idx + 1 : end]:
            if not line.strip():
                continue
            tokens = line.split()
            if len(tokens) != len(columns):
                warnings.warn(
                    f"dropping incomplete data line: {line.strip()!r}",
                    DataFormatWarning,
                    stacklevel=2,
                )
                continue
            try:
                evals.append(_to_int64(tokens[evals_col]))
                best.append(float(tokens[best_col]))
            except ValueError:
                raise NonNumericMandatoryField(line.strip()) from None
            if current_col is not None:
                current.append(_parse_float_or_nan(tokens[current_col]))
            for j, name in param_cols:
                params[name].append(_parse_float_or_nan(tokens[j]))

        if not evals:
            continue
        runs.append(
            TraceRun(
                evals=np.array(evals, dtype=np.int64),
                best=np.array(best),
                instance=len(runs) + 1,
                current=np.array(current) if current_col is not None else None,
                params={name: np.array(vals) for name, vals in params.items()},
            )
        )
    return runs


def _parse_float_or_nan(token: str) -> float:
    try:
        return float(token)
    except ValueError:
        return math.nan


# ---------------------------------------------------------------------------
# Direction detection


def detect_direction(runs: list[TraceRun]) -> Direction:
    """Infer the optimization direction from best-so-far monotonicity.

    Raises MixedMonotonicity when some runs improve upward and others
    downward (or a single run does both). All-constant traces default to
    maximization.
    """
    any_inc = any_dec = False
    for run in runs:
        diffs = np.diff(run.best)
        inc = bool(np.any(diffs > 0))
        dec = bool(np.any(diffs < 0))
        if inc and dec:
            raise MixedMonotonicity("a run's best-so-far values both increase and decrease")
        any_inc |= inc
        any_dec |= dec
    if any_inc and any_dec:
        raise MixedMonotonicity("runs disagree on the optimization direction")
    return Direction.MINIMIZE if any_dec else Direction.MAXIMIZE


# ---------------------------------------------------------------------------
# Experiment loading


_ARCHIVE_SUFFIXES = (".zip", ".tar", ".gz", ".tgz", ".bz2", ".bz", ".xz")


def load_experiment(root) -> DataSetCollection:
    """Load every meta-data file under a directory or archive into data sets.

    Runs are grouped by (algorithm, function, dimension) across meta-data
    entries; the optimization direction is detected per group. Instance ids
    from the meta-data are attached to runs in order when the counts agree,
    otherwise a warning is emitted and ordinal ids are kept.
    """
    root = Path(root)
    if not root.exists():
        raise FileNotFoundError(root)
    if root.is_dir():
        return _load_tree(root)
    tmp = tempfile.mkdtemp(prefix="ioha-archive-")
    try:
        _extract_archive(root, Path(tmp))
        return _load_tree(Path(tmp))
    finally:
        shutil.rmtree(tmp, ignore_errors=True)


def _extract_archive(path: Path, dest: Path) -> None:
    if zipfile.is_zipfile(path):
        with zipfile.ZipFile(path) as zf:
            zf.extractall(dest)
        return
    try:
        with tarfile.open(path, mode="r:*") as tf:
            tf.extractall(dest)
        return
    except tarfile.ReadError:
        pass
    raise EmptyArchive(f"not a supported archive: {path}")


def _load_tree(root: Path) -> DataSetCollection:
    info_files = sorted(root.rglob("*.info"))
    if not info_files:
        raise EmptyArchive(f"no meta-data (.info) files under {root}")

    groups: dict[tuple[str, str, int], list[TraceRun]] = {}
    for info_path in info_files:
        for entry in parse_info(info_path.read_text()):
            raw_path = info_path.parent / entry.data_path
            if not raw_path.is_file():
                raise MissingRawFile(raw_path)
            runs = parse_raw(raw_path.read_text())
            if len(runs) != len(entry.instances):
                warnings.warn(
                    f"{raw_path.name}: {len(runs)} runs but {len(entry.instances)} "
                    "instance tokens in meta-data; raw file wins",
                    DataFormatWarning,
                    stacklevel=2,
                )
            else:
                for run, (instance, _budget, _best) in zip(runs, entry.instances):
                    run.instance = instance
            key = (entry.alg_id, entry.func_id, entry.dimension)
            groups.setdefault(key, []).extend(runs)

    datasets = []
    for (alg_id, func_id, dimension), runs in sorted(groups.items()):
        datasets.append(
            DataSet(
                alg_id=alg_id,
                func_id=func_id,
                dimension=dimension,
                direction=detect_direction(runs),
                runs=runs,
            )
        )
    return DataSetCollection(datasets)


# ---------------------------------------------------------------------------
# Serialization (canonical round-trip format)


def _format_float(x: float) -> str:
    return repr(float(x))


def _quote_meta_value(value: str) -> str:
    return "'" + value + "'"


def serialize_info(entries: list[MetaEntry]) -> str:
    lines = []
    for entry in entries:
        pairs = []
        if entry.suite is not None:
            pairs.append(f"suite = {_quote_meta_value(entry.suite)}")
        pairs.append(f"funcId = {entry.func_id}")
        pairs.append(f"DIM = {entry.dimension}")
        pairs.append(f"algId = {_quote_meta_value(entry.alg_id)}")
        pairs.extend(f"{k} = {_quote_meta_value(v)}" for k, v in entry.extra.items())
        lines.append(", ".join(pairs))
        if entry.comment is not None:
            lines.append(entry.comment)
        tokens = [
            f"{inst}:{budget}|{_format_float(best)}" for inst, budget, best in entry.instances
        ]
        lines.append(", ".join([entry.data_path] + tokens))
    return "\n".join(lines) + "\n"


def serialize_raw(runs: list[TraceRun]) -> str:
    """Write runs back to the raw log format (one separator line per run)."""
    lines = []
    for run in runs:
        columns = [EVALS_COLUMN]
        if run.current is not None:
            columns.append(CURRENT_COLUMN)
        columns.append(BEST_COLUMN)
        columns.extend(run.params)
        lines.append(" ".join(f'"{c}"' for c in columns))
        for i in range(len(run.evals)):
            cells = [str(int(run.evals[i]))]
            if run.current is not None:
                cells.append(_format_float(run.current[i]))
            cells.append(_format_float(run.best[i]))
            cells.extend(_format_float(run.params[name][i]) for name in run.params)
            lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def write_dataset(ds: DataSet, root) -> Path:
    """Write one data set as an .info file plus raw file under ``root``."""
    root = Path(root)
    data_dir = root / f"data_f{ds.func_id}"
    data_dir.mkdir(parents=True, exist_ok=True)
    raw_name = f"IOHprofiler_f{ds.func_id}_DIM{ds.dimension}.dat"
    (data_dir / raw_name).write_text(serialize_raw(ds.runs))
    entry = MetaEntry(
        func_id=ds.func_id,
        dimension=ds.dimension,
        alg_id=ds.alg_id,
        data_path=f"data_f{ds.func_id}/{raw_name}",
        instances=[(run.instance, run.budget, run.final_value) for run in ds.runs],
    )
    info_path = root / f"IOHprofiler_f{ds.func_id}_DIM{ds.dimension}.info"
    info_path.write_text(serialize_info([entry]))
    return info_path


def write_collection(collection: DataSetCollection, root) -> Path:
    """Write a collection as one sub-directory per algorithm."""
    root = Path(root)
    for ds in collection:
        write_dataset(ds, root / ds.alg_id.replace("/", "_"))
    return root


# ---------------------------------------------------------------------------
# Structural equality (numpy-array fields make dataclass eq unusable)


def trace_runs_equal(a: TraceRun, b: TraceRun) -> bool:
    if a.instance != b.instance or set(a.params) != set(b.params):
        return False
    if (a.current is None) != (b.current is None):
        return False
    if not np.array_equal(a.evals, b.evals):
        return False
    if not np.array_equal(a.best, b.best, equal_nan=True):
        return False
    if a.current is not None and not np.array_equal(a.current, b.current, equal_nan=True):
        return False
    return all(np.array_equal(a.params[k], b.params[k], equal_nan=True) for k in a.params)


def datasets_equal(a: DataSet, b: DataSet) -> bool:
    return (
        a.key == b.key
        and a.direction == b.direction
        and len(a.runs) == len(b.runs)
        and all(trace_runs_equal(x, y) for x, y in zip(a.runs, b.runs))
    )


def meta_entries_equal(a: MetaEntry, b: MetaEntry) -> bool:
    return (
        a.func_id == b.func_id
        and a.dimension == b.dimension
        and a.alg_id == b.alg_id
        and a.data_path == b.data_path
        and a.suite == b.suite
        and a.comment == b.comment
        and a.extra == b.extra
        and len(a.instances) == len(b.instances)
        and all(
            x[0] == y[0] and x[1] == y[1] and x[2] == y[2]
            for x, y in zip(a.instances, b.instances)
        )
    )
