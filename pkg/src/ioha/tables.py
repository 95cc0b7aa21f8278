"""Tabular documents and their CSV / LaTeX serialization.

Cells keep their Python types until export: floats are rendered with up to
six significant digits (scientific notation outside [1e-4, 1e6)), infinities
as ``Inf``, missing values as empty cells, and text is quoted only when the
format requires it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .align import AlignedMatrix, Perspective


@dataclass
class TableDocument:
    header: list[str]
    rows: list[list]
    caption: str = ""

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError("table rows must match the header length")


def format_cell(value) -> str:
    """Canonical string form of one cell."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        return "Inf" if x > 0 else "-Inf"
    return f"{x:.6g}"


def export_table(table: TableDocument, fmt: str = "csv") -> bytes:
    fmt = fmt.lower()
    if fmt == "csv":
        return _to_csv(table)
    if fmt == "latex":
        return _to_latex(table)
    raise ValueError(f"unsupported table format {fmt!r}")


def _to_csv(table: TableDocument) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue().encode()


_LATEX_REPLACEMENTS = [
    ("\\", r"\textbackslash{}"),
    ("&", r"\&"),
    ("%", r"\%"),
    ("$", r"\$"),
    ("#", r"\#"),
    ("_", r"\_"),
    ("{", r"\{"),
    ("}", r"\}"),
    ("~", r"\textasciitilde{}"),
    ("^", r"\textasciicircum{}"),
]


def _latex_escape(text: str) -> str:
    for raw, escaped in _LATEX_REPLACEMENTS:
        text = text.replace(raw, escaped)
    return text


def _to_latex(table: TableDocument) -> bytes:
    cols = "l" * len(table.header)
    lines = []
    if table.caption:
        lines.append(r"\begin{table}")
        lines.append(rf"\caption{{{_latex_escape(table.caption)}}}")
    lines.append(rf"\begin{{tabular}}{{{cols}}}")
    lines.append(r"\toprule")
    lines.append(" & ".join(_latex_escape(h) for h in table.header) + r" \\")
    lines.append(r"\midrule")
    for row in table.rows:
        lines.append(" & ".join(_latex_escape(format_cell(v)) for v in row) + r" \\")
    lines.append(r"\bottomrule")
    lines.append(r"\end{tabular}")
    if table.caption:
        lines.append(r"\end{table}")
    return ("\n".join(lines) + "\n").encode()


def export_samples(aligned: AlignedMatrix, layout: str = "long") -> TableDocument:
    """Raw aligned values as a table, one row per (anchor, run) or per anchor."""
    anchor_name = (
        "target" if aligned.anchors.perspective is Perspective.FIXED_TARGET else "budget"
    )
    layout = layout.lower()
    if layout == "long":
        rows = [
            [float(anchor), run + 1, _sample_cell(aligned.per_run[run, j])]
            for j, anchor in enumerate(aligned.anchors.values)
            for run in range(aligned.n_runs)
        ]
        return TableDocument([anchor_name, "run", "value"], rows)
    if layout == "wide":
        header = [anchor_name] + [f"run_{i + 1}" for i in range(aligned.n_runs)]
        rows = [
            [float(anchor)] + [_sample_cell(v) for v in aligned.per_run[:, j]]
            for j, anchor in enumerate(aligned.anchors.values)
        ]
        return TableDocument(header, rows)
    raise ValueError(f"unsupported layout {layout!r}")


def _sample_cell(value: float):
    # hitting times are integral; keep them readable as integers
    v = float(value)
    if math.isfinite(v) and v == int(v):
        return int(v)
    return v
