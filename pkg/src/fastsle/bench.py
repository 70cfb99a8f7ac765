"""Timing harness and parameter sweeps.

Time per point is the wall-clock time of block construction (fast algorithm
only) plus all point evaluations, divided by the number of points. Driving
generation and map setup are shared by both algorithms and not timed.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .blocks import build_blocks
from .driving import DEFAULT_NU, Scheme, Variant, make_partition, sample_driving
from .slitmaps import Kind, PackedMaps
from .trace import TraceResult, compute_trace_baseline, compute_trace_fast, error_between, make_maps

__all__ = [
    "DEFAULT_EPS",
    "DEFAULT_N_ORDER",
    "POINTS_PER_TRACE",
    "TraceConfig",
    "SweepRow",
    "default_b",
    "default_L",
    "default_d",
    "prepare",
    "evaluate",
    "run_trace",
    "time_per_point",
    "sweep",
    "loglog_slope",
]

DEFAULT_EPS = 1e-6
DEFAULT_N_ORDER = 12
POINTS_PER_TRACE = 1000
AXES = ("N", "n", "L", "b")


def default_b(N: int, kappa: float = 8 / 3) -> int:
    """Block size rule ``b ~ 0.12 sqrt(N)``; the optimum sits nearer ``0.1 sqrt(N)`` at kappa = 6."""
    coef = 0.1 if math.isclose(kappa, 6.0) else 0.12
    return max(1, round(coef * math.sqrt(N)))


def default_L(n: int, eps: float = DEFAULT_EPS) -> float:
    """``L`` with ``L**-n == eps``."""
    if n < 1 or not 0 < eps < 1:
        raise ValueError(f"need n >= 1 and 0 < eps < 1, got n={n}, eps={eps}")
    return eps ** (-1.0 / n)


def default_d(N: int) -> int:
    return max(1, N // POINTS_PER_TRACE)


@dataclass(frozen=True)
class TraceConfig:
    """Everything needed to reproduce one trace. ``None`` fields take the default rules."""

    N: int = 10_000
    kappa: float = 8 / 3
    d: int | None = None
    discretization: Kind = Kind.TILTED
    scheme: Scheme = Scheme.UNIFORM
    nu: float = DEFAULT_NU
    variant: Variant = Variant.GAUSSIAN
    seed: int = 0
    algorithm: str = "fast"
    b: int | None = None
    n: int = DEFAULT_N_ORDER
    L: float | None = None
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        object.__setattr__(self, "discretization", Kind(self.discretization))
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.algorithm not in ("baseline", "fast"):
            raise ValueError(f"algorithm must be 'baseline' or 'fast', got {self.algorithm!r}")
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.d is not None and not 1 <= self.d <= self.N:
            raise ValueError(f"d must lie in 1..N={self.N}, got {self.d}")
        if self.b is not None and self.b < 1:
            raise ValueError(f"b must be >= 1, got {self.b}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.L is not None and not self.L > 1:
            raise ValueError(f"L must exceed 1, got {self.L}")

    def resolved(self) -> TraceConfig:
        return replace(
            self,
            d=default_d(self.N) if self.d is None else self.d,
            b=default_b(self.N, self.kappa) if self.b is None else self.b,
            L=default_L(self.n, self.eps) if self.L is None else self.L,
        )

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = v.value if isinstance(v, (Kind, Scheme, Variant)) else v
        return out

    def driving_key(self) -> tuple:
        # everything that fixes the maps and the requested indices
        return (self.N, self.kappa, self.d, self.discretization, self.scheme, self.nu, self.variant, self.seed)


def prepare(cfg: TraceConfig) -> tuple[PackedMaps, np.ndarray]:
    cfg = cfg.resolved()
    part = make_partition(cfg.N, cfg.scheme, cfg.nu)
    sample = sample_driving(part, cfg.kappa, cfg.variant, cfg.seed)
    idx = np.arange(cfg.d, cfg.N + 1, cfg.d, dtype=np.int64)
    return make_maps(sample, cfg.discretization), idx


def evaluate(cfg: TraceConfig, maps: PackedMaps, idx: np.ndarray) -> TraceResult:
    """Run the configured algorithm on prepared maps; ``cfg`` must be resolved."""
    echo = cfg.as_dict()
    if cfg.algorithm == "baseline":
        return compute_trace_baseline(maps, idx, echo)
    blocks = build_blocks(maps, cfg.b, cfg.n)
    return compute_trace_fast(maps, blocks, idx, cfg.L, echo)


def run_trace(cfg: TraceConfig) -> TraceResult:
    cfg = cfg.resolved()
    maps, idx = prepare(cfg)
    return evaluate(cfg, maps, idx)


def time_per_point(cfg: TraceConfig, repetitions: int = 5, _prepared=None) -> float:
    """Median over ``repetitions`` of (build + evaluation) time divided by ``N/d``."""
    if cfg.d is not None and cfg.d > cfg.N:
        raise ValueError(f"d={cfg.d} exceeds N={cfg.N}")
    if repetitions < 1:
        raise ValueError("need at least one repetition")
    cfg = cfg.resolved()
    maps, idx = _prepared or prepare(cfg)
    times = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        evaluate(cfg, maps, idx)
        times.append(time.perf_counter() - t0)
    return statistics.median(times) / len(idx)


@dataclass(frozen=True)
class SweepRow:
    N: int
    b: int
    n: int
    L: float
    kappa: float
    d: int
    algorithm: str
    discretization: str
    scheme: str
    variant: str
    time_per_point: float
    error: float | None
    samples: int
    seed: int

    def as_dict(self) -> dict:
        return asdict(self)


def sweep(
    axis: str,
    values,
    base: TraceConfig,
    repetitions: int = 5,
    with_error: bool = True,
) -> list[SweepRow]:
    """One timed row per value of ``axis``; the other parameters come from ``base``.

    Unset ``b``, ``L`` and ``d`` in ``base`` are resolved per row, so an N
    sweep follows ``b ~ sqrt(N)`` and an n sweep keeps ``L**-n = eps``. The
    error column compares the configured algorithm to the baseline on the
    same driving sample (zero for baseline rows).
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    values = list(values)
    if not values:
        raise ValueError("empty value list")
    prepared: dict[tuple, tuple] = {}
    reference: dict[tuple, TraceResult] = {}
    rows = []
    for v in values:
        cfg = replace(base, **{axis: float(v) if axis == "L" else int(v)}).resolved()
        key = cfg.driving_key()
        if key not in prepared:
            prepared = {key: prepare(cfg)}
        maps, idx = prepared[key]
        tpp = time_per_point(cfg, repetitions, _prepared=(maps, idx))
        err = None
        if with_error:
            if cfg.algorithm == "baseline":
                err = 0.0
            else:
                if key not in reference:
                    reference = {key: compute_trace_baseline(maps, idx)}
                err = error_between(evaluate(cfg, maps, idx), reference[key])
        rows.append(
            SweepRow(
                N=cfg.N, b=cfg.b, n=cfg.n, L=cfg.L, kappa=cfg.kappa, d=cfg.d,
                algorithm=cfg.algorithm, discretization=cfg.discretization.value,
                scheme=cfg.scheme.value, variant=cfg.variant.value,
                time_per_point=tpp, error=err, samples=repetitions, seed=cfg.seed,
            )
        )
    return rows


def loglog_slope(rows, x: str, y: str) -> float:
    """Least-squares slope of ``ln y`` against ``ln x``; rows are mappings or objects."""
    rows = list(rows)
    if len(rows) < 3:
        raise ValueError(f"need at least 3 rows, got {len(rows)}")

    def get(r, k):
        return r[k] if isinstance(r, dict) else getattr(r, k)

    xs = np.array([get(r, x) for r in rows], dtype=float)
    ys = np.array([get(r, y) for r in rows], dtype=float)
    if not (np.all(np.isfinite(xs) & (xs > 0)) and np.all(np.isfinite(ys) & (ys > 0))):
        raise ValueError("log-log fit needs finite positive data")
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)
