"""Build the seven survey figures from oscgauss CSV files.

The boundary with the computing package is strictly a file contract: every
figure is drawn from CSV columns documented in SCHEMAS, never by calling
the solver.  Images are deterministic (fixed size, fonts, no embedded
timestamps or version metadata) so reruns on identical CSVs are
hash-stable.
"""
from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGSIZE = (7.0, 5.0)
DPI = 150

SCHEMAS = {
    "trace": ["omega", "root_index", "re", "im", "speed"],
    "norm_samples": ["omega", "norm_re", "norm_im", "abs_norm"],
    "sweep": ["omega", "abs_error", "approx_re", "approx_im", "ref_re", "ref_im"],
    "distances": ["omega", "node_index", "distance"],
}

#: figure id -> (schema of each input, default input file names)
FIGURE_INPUTS = {
    "fig1": (["trace"], ["trace_n2.csv"]),
    "fig2": (["trace"], ["trace_n2.csv"]),
    "fig3": (["norm_samples", "trace"], ["breakdown_n2_samples.csv", "trace_n2.csv"]),
    "fig4": (["trace", "trace"], ["trace_n3.csv", "trace_n2.csv"]),
    "fig5": (["sweep"], ["sweep_gauss-osc_2pt_sin.csv"]),
    "fig6": (["trace"], ["trace_n16.csv"]),
    "fig7": (["distances"], ["superinterp_distances_n16.csv"]),
}


class SchemaMismatchError(Exception):
    """CSV header differs from the documented contract."""

    def __init__(self, path, expected, found):
        self.path = path
        self.expected = expected
        self.found = found
        missing = [c for c in expected if c not in found]
        extra = [c for c in found if c not in expected]
        super().__init__(
            f"{path}: header mismatch (missing: {missing or '-'}, unexpected: {extra or '-'})"
        )


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    inputs: tuple
    output: str
    scale: str = "linear"  # linear | log-log | omega2-scaled

    @classmethod
    def default(cls, figure_id: str, in_dir: str, out_dir: str) -> "FigureSpec":
        if figure_id not in FIGURE_INPUTS:
            raise ValueError(f"unknown figure id {figure_id!r}")
        _, names = FIGURE_INPUTS[figure_id]
        scale = {"fig5": "log-log", "fig7": "omega2-scaled"}.get(figure_id, "linear")
        return cls(
            figure_id=figure_id,
            inputs=tuple(os.path.join(in_dir, n) for n in names),
            output=os.path.join(out_dir, f"{figure_id}.png"),
            scale=scale,
        )


def read_csv(path: str, schema: str):
    """Read one CSV into a dict of float columns, validating the header."""
    expected = SCHEMAS[schema]
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows or rows[0] != expected:
        raise SchemaMismatchError(path, expected, rows[0] if rows else [])
    cols = {name: [] for name in expected}
    for row in rows[1:]:
        for name, value in zip(expected, row):
            cols[name].append(float(value))
    return {name: np.asarray(vals) for name, vals in cols.items()}


def _paths_from_trace(data):
    """Split trace rows into per-root (omega, re, im, speed) arrays."""
    out = {}
    for idx in sorted(set(int(i) for i in data["root_index"])):
        mask = data["root_index"] == idx
        order = np.argsort(data["omega"][mask], kind="stable")
        out[idx] = {
            key: data[key][mask][order] for key in ("omega", "re", "im", "speed")
        }
    return out


def _new_axes(title, xlabel, ylabel):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=DPI, metadata={"Software": None})
    plt.close(fig)


def _draw_trajectories(ax, paths, style="-", color_offset=0):
    for j, (idx, p) in enumerate(sorted(paths.items())):
        ax.plot(
            p["re"], p["im"], style,
            color=f"C{(j + color_offset) % 10}", linewidth=1.0,
            label=f"root {idx}" if style == "-" else None,
        )


def fig1(spec):
    data = read_csv(spec.inputs[0], "trace")
    fig, ax = _new_axes("Gaussian nodes in the complex plane", "Re x", "Im x")
    paths = _paths_from_trace(data)
    _draw_trajectories(ax, paths)
    for p in paths.values():
        ax.plot(p["re"][0], p["im"][0], "ko", markersize=4)
    ax.legend(loc="upper right", fontsize=8)
    _save(fig, spec.output)


def fig2(spec):
    """Zoom on the left curve, reflected across the imaginary axis."""
    data = read_csv(spec.inputs[0], "trace")
    fig, ax = _new_axes("Left node trajectory (reflected, zoomed)", "-Re x", "Im x")
    paths = _paths_from_trace(data)
    left = min(paths.values(), key=lambda p: p["re"][0])
    ax.plot(-left["re"], left["im"], "-", color="C0", linewidth=1.0)
    hi = np.quantile(-left["re"], 0.98)
    ax.set_xlim(min(-left["re"]) - 0.02, hi)
    _save(fig, spec.output)


def fig3(spec):
    data = read_csv(spec.inputs[0], "norm_samples")
    trace = read_csv(spec.inputs[1], "trace")
    fig, ax = _new_axes("Norm magnitude and node speed", "omega", "")
    ax.plot(data["omega"], data["abs_norm"], "-", color="C0", label="|(p,p)|")
    paths = _paths_from_trace(trace)
    first = paths[min(paths)]
    finite = ~np.isnan(first["speed"])
    ax.plot(
        first["omega"][finite], first["speed"][finite], "--", color="C3",
        label="|dx/domega|",
    )
    ax.set_yscale("log")
    ax.legend(loc="upper right", fontsize=8)
    _save(fig, spec.output)


def fig4(spec):
    solid = read_csv(spec.inputs[0], "trace")
    dashed = read_csv(spec.inputs[1], "trace")
    fig, ax = _new_axes("Node trajectories (solid) over reference (dashed)", "Re x", "Im x")
    _draw_trajectories(ax, _paths_from_trace(dashed), style="--", color_offset=5)
    _draw_trajectories(ax, _paths_from_trace(solid), style="-")
    ax.legend(loc="upper right", fontsize=8)
    _save(fig, spec.output)


def fig5(spec):
    data = read_csv(spec.inputs[0], "sweep")
    fig, ax = _new_axes("Absolute error against the reference", "omega", "error")
    ax.loglog(data["omega"], data["abs_error"], "o-", color="C0", markersize=3,
              label="rule error")
    guide = data["abs_error"][0] * (data["omega"] / data["omega"][0]) ** -3.0
    ax.loglog(data["omega"], guide, "k--", linewidth=0.8, label="omega^-3")
    ax.legend(loc="lower left", fontsize=8)
    _save(fig, spec.output)


def fig6(spec):
    data = read_csv(spec.inputs[0], "trace")
    fig, ax = _new_axes("Sixteen nodes in the complex plane", "Re x", "Im x")
    _draw_trajectories(ax, _paths_from_trace(data))
    _save(fig, spec.output)


def fig7(spec):
    data = read_csv(spec.inputs[0], "distances")
    fig, ax = _new_axes(
        "Node-to-superinterpolation distances scaled by omega^2", "node index",
        "distance x omega^2",
    )
    omegas = sorted(set(data["omega"]))
    for j, w in enumerate(omegas):
        mask = data["omega"] == w
        idx = data["node_index"][mask]
        order = np.argsort(idx, kind="stable")
        scaled = data["distance"][mask][order] * w * w
        ax.plot(idx[order], scaled, "o-", color=f"C{j % 10}", markersize=3,
                label=f"omega={w:g}")
    ax.set_yscale("log")
    ax.legend(loc="upper left", fontsize=8)
    _save(fig, spec.output)


BUILDERS = {
    "fig1": fig1,
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
}


def make_figure(spec: FigureSpec) -> str:
    """Render one figure; returns the output path."""
    if spec.figure_id not in BUILDERS:
        raise ValueError(f"unknown figure id {spec.figure_id!r}")
    expected_schemas, _ = FIGURE_INPUTS[spec.figure_id]
    if len(spec.inputs) != len(expected_schemas):
        raise ValueError(
            f"{spec.figure_id} needs {len(expected_schemas)} input file(s), got {len(spec.inputs)}"
        )
    BUILDERS[spec.figure_id](spec)
    return spec.output
