"""Chordal SLE traces by composition of slit maps, with a block hat-series fast path."""

from ._backend import BACKEND
from .driving import DrivingSample, Partition, Scheme, Variant, make_partition, sample_driving
from .slitmaps import Kind, SlitMap, cut_interval, eval_map, eval_real_outside_cut, make_tilted, make_vertical, solve_alpha, tip
from .hatseries import HatSeries, binomial_series, compose, eval_hat, hat_of_map
from .blocks import Block, build_blocks, compute_radius, eval_block
from .trace import TraceResult, compute_trace_baseline, compute_trace_fast, error_between, make_maps

__all__ = [
    "BACKEND",
    "DrivingSample", "Partition", "Scheme", "Variant", "make_partition", "sample_driving",
    "Kind", "SlitMap", "cut_interval", "eval_map", "eval_real_outside_cut", "make_tilted",
    "make_vertical", "solve_alpha", "tip",
    "HatSeries", "binomial_series", "compose", "eval_hat", "hat_of_map",
    "Block", "build_blocks", "compute_radius", "eval_block",
    "TraceResult", "compute_trace_baseline", "compute_trace_fast", "error_between", "make_maps",
]

__version__ = "0.1.0"
