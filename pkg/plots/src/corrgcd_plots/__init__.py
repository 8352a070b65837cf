"""Rendering of decoder benchmark CSV files into BLER, query-count, and
query-ratio figures. Consumes only the CSV contract of the benchmark
harness; no in-process coupling to the decoder package."""

from .render import PlotError, PlotSpec, extract_series, render

__version__ = "0.1.0"
