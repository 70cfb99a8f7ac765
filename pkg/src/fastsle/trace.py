"""Trace points ``z_k = h_1 o h_2 o ... o h_k (0)``.

Two evaluators compute the same points: the baseline applies all ``k`` maps,
the fast one replaces each full block by its hat series whenever the running
point is far enough from the block's cuts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .blocks import BlockSet
from .driving import DrivingSample
from .slitmaps import Kind, PackedMaps

__all__ = [
    "TraceResult",
    "make_maps",
    "as_indices",
    "compute_trace_baseline",
    "compute_trace_fast",
    "error_between",
]


@dataclass(frozen=True, eq=False)
class TraceResult:
    indices: np.ndarray
    points: np.ndarray
    config: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.indices)


def make_maps(sample: DrivingSample, discretization: Kind | str = Kind.TILTED) -> PackedMaps:
    return PackedMaps.from_increments(discretization, sample.increments, sample.partition.deltas)


def as_indices(indices, N: int) -> np.ndarray:
    idx = np.ascontiguousarray(indices, dtype=np.int64)
    if idx.ndim != 1:
        raise ValueError("indices must be one-dimensional")
    if len(idx) and (idx[0] < 1 or idx[-1] > N or np.any(np.diff(idx) <= 0)):
        raise ValueError(f"indices must be strictly increasing within 1..{N}")
    return idx


def compute_trace_baseline(maps, indices, config: dict | None = None) -> TraceResult:
    pm = PackedMaps.from_maps(maps)
    idx = as_indices(indices, len(pm))
    pts = kernels.trace_baseline(pm.kinds, pm.params, idx)
    return TraceResult(idx, pts, dict(config or {}, algorithm="baseline"))


def compute_trace_fast(maps, blocks: BlockSet, indices, L: float, config: dict | None = None) -> TraceResult:
    """Block evaluation; ``L = inf`` never uses a series and reproduces the baseline bit for bit."""
    if not L > 1:
        raise ValueError(f"L must exceed 1, got {L!r}")
    pm = PackedMaps.from_maps(maps)
    if len(blocks) != len(pm) // blocks.b:
        raise ValueError("blocks were not built from these maps")
    idx = as_indices(indices, len(pm))
    pts = kernels.trace_fast(pm.kinds, pm.params, blocks.coeffs, blocks.radii, blocks.b, idx, float(L))
    cfg = dict(config or {}, algorithm="fast", b=blocks.b, n=blocks.n, L=float(L))
    return TraceResult(idx, pts, cfg)


def error_between(a: TraceResult, b: TraceResult, reduce: str = "mean") -> float:
    """Mean (or max) distance between corresponding points of two traces."""
    if not np.array_equal(a.indices, b.indices):
        raise ValueError("traces were computed at different indices")
    if len(a.indices) == 0:
        raise ValueError("empty traces")
    dist = np.abs(a.points - b.points)
    if reduce == "mean":
        return float(np.mean(dist))
    if reduce == "max":
        return float(np.max(dist))
    raise ValueError(f"unknown reduction {reduce!r}")
