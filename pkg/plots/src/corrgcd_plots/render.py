"""Figure construction from benchmark CSV files.

Input CSV schema (header produced by the benchmark harness):
decoder,ebn0_db,trials,block_errors,bler,avg_queries,avg_discarded,
status_early,status_stopped,status_capped,status_parity_hit
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
# deterministic SVG element ids (otherwise salted per-process)
matplotlib.rcParams["svg.hashsalt"] = "fixed"
import matplotlib.pyplot as plt  # noqa: E402

KINDS = ("bler", "queries", "ratio")

_REQUIRED = {
    "bler": ("decoder", "ebn0_db", "bler"),
    "queries": ("decoder", "ebn0_db", "avg_queries"),
    "ratio": ("decoder", "ebn0_db", "avg_queries"),
}

_Y_FIELD = {"bler": "bler", "queries": "avg_queries", "ratio": "avg_queries"}

_Y_LABEL = {"bler": "BLER", "queries": "average pattern count",
            "ratio": "pattern count ratio vs AI"}


class PlotError(ValueError):
    """Malformed input or unusable plot specification."""


@dataclass(frozen=True)
class PlotSpec:
    csv_paths: tuple
    kind: str
    out_path: str

    def validate(self):
        if self.kind not in KINDS:
            raise PlotError(f"unknown figure kind {self.kind!r}")
        if not self.csv_paths:
            raise PlotError("at least one CSV path is required")


def load_rows(path, kind):
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in _REQUIRED[kind] if c not in header]
            if missing:
                raise PlotError(f"{path}: missing column(s) {', '.join(missing)}")
            return list(reader)
    except OSError as e:
        raise PlotError(f"cannot read {path}: {e}") from e


def extract_series(spec: PlotSpec) -> dict:
    """label -> sorted list of (ebn0_db, value) points for the figure kind."""
    spec.validate()
    yf = _Y_FIELD[spec.kind]
    multi = len(spec.csv_paths) > 1
    series = {}
    for path in spec.csv_paths:
        rows = load_rows(path, spec.kind)
        stem = os.path.splitext(os.path.basename(path))[0]
        by_dec = {}
        for r in rows:
            try:
                pt = (float(r["ebn0_db"]), float(r[yf]))
            except (TypeError, ValueError):
                raise PlotError(f"{path}: non-numeric value in "
                                f"ebn0_db/{yf}") from None
            by_dec.setdefault(r["decoder"], []).append(pt)
        if spec.kind == "ratio":
            if "AI" not in by_dec:
                raise PlotError(f"{path}: ratio figure needs an AI baseline series")
            ai = dict(by_dec["AI"])
            for dec, pts in by_dec.items():
                joined = [(e, q / ai[e]) for e, q in pts if e in ai and ai[e] > 0]
                if joined:
                    by_dec[dec] = joined
                else:
                    raise PlotError(f"{path}: no ebn0_db overlap between "
                                    f"{dec} and AI")
        for dec, pts in by_dec.items():
            label = f"{dec} [{stem}]" if multi else dec
            series[label] = sorted(pts)
    if not series:
        raise PlotError("no data series found in the given CSV files")
    return series


def build_figure(spec: PlotSpec):
    series = extract_series(spec)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for label in sorted(series):
        x, y = zip(*series[label])
        ax.plot(x, y, marker="o", label=label)
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel(_Y_LABEL[spec.kind])
    if spec.kind in ("bler", "queries"):
        ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig, series


def render(spec: PlotSpec) -> dict:
    """Write the figure to spec.out_path; returns the plotted series.

    Output bytes are deterministic for fixed inputs: format-level
    timestamps are suppressed.
    """
    fig, series = build_figure(spec)
    ext = os.path.splitext(spec.out_path)[1].lower()
    metadata = {"Date": None} if ext == ".svg" else None
    try:
        fig.savefig(spec.out_path, dpi=120, metadata=metadata)
    except OSError as e:
        raise PlotError(f"cannot write {spec.out_path}: {e}") from e
    finally:
        plt.close(fig)
    return series
