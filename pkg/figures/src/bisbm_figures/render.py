"""Render benchmark CSV outputs into figures.

Reads only the documented file formats (aggregate sweep CSV, comparison CSV,
edge-list/types/partition text files); deliberately independent of the main
package so the figure scripts can run anywhere the CSVs land. Rendering is a
pure function of the inputs and the fixed style below: re-rendering identical
inputs produces identical image bytes.
"""

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SWEEP_COLUMNS = ("method", "lambda", "nmi_q10", "nmi_median", "nmi_q90")
HIST_COLUMNS = ("method", "adjusted_score")

_STYLE = {
    "dpi": 150,
    "figsize": (6.0, 4.0),
    "band_alpha": 0.25,
    "hist_bins": 40,
    "colors": ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
               "#8c564b", "#17becf", "#7f7f7f"],
}


class FigureInputError(ValueError):
    """Missing columns, empty input, or malformed data files."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str  # "sweep" | "histogram" | "adjacency"
    inputs: tuple
    output: str
    xlabel: str = ""
    ylabel: str = ""


def read_csv_rows(path, required):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise FigureInputError(f"{path}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise FigureInputError(f"{path}: no data rows")
    return rows


def build_sweep_figure(csv_path, xlabel="mixing parameter", ylabel="NMI"):
    """Median line plus shaded 10-90% quantile band per method."""
    rows = read_csv_rows(csv_path, SWEEP_COLUMNS)
    methods = sorted({r["method"] for r in rows})
    fig, ax = plt.subplots(figsize=_STYLE["figsize"])
    for i, method in enumerate(methods):
        pts = sorted(
            (float(r["lambda"]), float(r["nmi_q10"]), float(r["nmi_median"]),
             float(r["nmi_q90"]))
            for r in rows if r["method"] == method
        )
        lam = [p[0] for p in pts]
        q10 = [p[1] for p in pts]
        med = [p[2] for p in pts]
        q90 = [p[3] for p in pts]
        color = _STYLE["colors"][i % len(_STYLE["colors"])]
        ax.fill_between(lam, q10, q90, color=color, alpha=_STYLE["band_alpha"],
                        linewidth=0)
        ax.plot(lam, med, color=color, marker="o", markersize=3, label=method)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def build_hist_figure(csv_path, xlabel="final log-likelihood (common scale)",
                      ylabel="replicates"):
    """Overlaid per-method final-score histograms."""
    rows = read_csv_rows(csv_path, HIST_COLUMNS)
    methods = sorted({r["method"] for r in rows})
    scores = {
        m: [float(r["adjusted_score"]) for r in rows if r["method"] == m]
        for m in methods
    }
    lo = min(min(v) for v in scores.values())
    hi = max(max(v) for v in scores.values())
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    edges = np.linspace(lo, hi, _STYLE["hist_bins"] + 1)
    fig, ax = plt.subplots(figsize=_STYLE["figsize"])
    for i, method in enumerate(methods):
        color = _STYLE["colors"][i % len(_STYLE["colors"])]
        ax.hist(scores[method], bins=edges, alpha=0.55, color=color,
                label=method)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def _parse_edges(path):
    edges = []
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (2, 3):
                raise FigureInputError(f"{path}:{line_no}: bad edge line")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = int(parts[2]) if len(parts) == 3 else 1
            except ValueError:
                raise FigureInputError(f"{path}:{line_no}: non-integer field") from None
            edges.append((u, v, w))
    if not edges:
        raise FigureInputError(f"{path}: no edges")
    return edges


def _parse_two_column(path, value_parser, what):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FigureInputError(f"{path}:{line_no}: bad {what} line")
            try:
                out[int(parts[0])] = value_parser(parts[1])
            except ValueError:
                raise FigureInputError(f"{path}:{line_no}: bad {what} value") from None
    if not out:
        raise FigureInputError(f"{path}: empty {what} file")
    return out


def build_adjacency_figure(edges_path, types_path, partition_path):
    """Bipartite incidence block, rows/columns sorted by partition groups."""
    edges = _parse_edges(edges_path)
    types = _parse_two_column(types_path, lambda s: {"a": 0, "b": 1}[s], "types")
    groups = _parse_two_column(partition_path, int, "partition")
    n = max(types) + 1
    a_ids = [i for i in range(n) if types.get(i) == 0]
    b_ids = [i for i in range(n) if types.get(i) == 1]
    if not a_ids or not b_ids:
        raise FigureInputError("types file must contain both 'a' and 'b' vertices")
    a_order = sorted(a_ids, key=lambda i: (groups.get(i, 0), i))
    b_order = sorted(b_ids, key=lambda i: (groups.get(i, 0), i))
    pos_a = {v: i for i, v in enumerate(a_order)}
    pos_b = {v: i for i, v in enumerate(b_order)}
    block = np.zeros((len(a_order), len(b_order)))
    for u, v, w in edges:
        if types.get(u) == 0 and types.get(v) == 1:
            block[pos_a[u], pos_b[v]] += w
        elif types.get(v) == 0 and types.get(u) == 1:
            block[pos_a[v], pos_b[u]] += w
        else:
            raise FigureInputError(f"edge ({u}, {v}) is not bipartite under the types file")
    fig, ax = plt.subplots(figsize=(5.0, 5.0 * len(a_order) / len(b_order)))
    ax.imshow(block, cmap="Greys", aspect="auto", interpolation="nearest")
    # group boundaries
    for order, axis in ((a_order, "h"), (b_order, "v")):
        cuts = [i for i in range(1, len(order))
                if groups.get(order[i]) != groups.get(order[i - 1])]
        for cut in cuts:
            if axis == "h":
                ax.axhline(cut - 0.5, color="#d62728", linewidth=0.8)
            else:
                ax.axvline(cut - 0.5, color="#d62728", linewidth=0.8)
    ax.set_xlabel("type-b vertices (sorted by group)")
    ax.set_ylabel("type-a vertices (sorted by group)")
    fig.tight_layout()
    return fig


def save(fig, path):
    fig.savefig(path, dpi=_STYLE["dpi"], metadata={"Software": "bisbm-figures"})
    plt.close(fig)


def render(spec):
    """Build and write the figure named by a FigureSpec; returns the path."""
    if spec.kind == "sweep":
        fig = build_sweep_figure(*spec.inputs)
    elif spec.kind == "histogram":
        fig = build_hist_figure(*spec.inputs)
    elif spec.kind == "adjacency":
        fig = build_adjacency_figure(*spec.inputs)
    else:
        raise FigureInputError(f"unknown figure kind {spec.kind!r}")
    if spec.xlabel:
        fig.axes[0].set_xlabel(spec.xlabel)
    if spec.ylabel:
        fig.axes[0].set_ylabel(spec.ylabel)
    save(fig, spec.output)
    return spec.output
