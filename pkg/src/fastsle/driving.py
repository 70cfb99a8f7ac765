"""Time partitions and random driving increments.

The driving function is approximated on a partition ``0 = t_0 < ... < t_N = 1``
by its increments ``delta_k = U(t_k) - U(t_{k-1})``. Two increment laws are
supported: independent Gaussians with variance ``kappa * Delta_k``, and the
symmetric two-point law ``+-sqrt(kappa * Delta_k)``.

Random numbers come from numpy's Philox4x64 counter-based generator keyed by
the seed, so a seed reproduces the same increments on every platform. Normal
variates are produced with the Marsaglia polar method on top of the uniform
stream (numpy's own ``standard_normal`` is not used, so the transform is
fixed by this module rather than by the numpy version).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

__all__ = [
    "Scheme",
    "Variant",
    "Partition",
    "DrivingSample",
    "make_partition",
    "sample_driving",
    "make_rng",
]


class Scheme(str, Enum):
    UNIFORM = "uniform"
    SPACED = "spaced"


class Variant(str, Enum):
    GAUSSIAN = "gaussian"
    BERNOULLI = "bernoulli"


DEFAULT_NU = 0.75


@dataclass(frozen=True)
class Partition:
    times: np.ndarray
    deltas: np.ndarray
    scheme: Scheme = Scheme.UNIFORM
    nu: float | None = None

    @property
    def N(self) -> int:
        return len(self.deltas)


@dataclass(frozen=True)
class DrivingSample:
    kappa: float
    increments: np.ndarray
    variant: Variant
    seed: int
    partition: Partition

    @property
    def N(self) -> int:
        return len(self.increments)


def make_partition(N: int, scheme: Scheme | str = Scheme.UNIFORM, nu: float = DEFAULT_NU) -> Partition:
    """Partition of [0, 1] into N steps.

    ``uniform`` gives ``t_k = k/N``; ``spaced`` gives ``t_k = (k/N)**(2*nu)``,
    which puts points of a kappa=8/3 curve at roughly equal spacing when
    ``nu = 3/4``.
    """
    scheme = Scheme(scheme)
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    k = np.arange(N + 1, dtype=np.float64)
    if scheme is Scheme.UNIFORM:
        times = k / N
        deltas = np.full(N, 1.0 / N)
        return Partition(times, deltas, scheme, None)
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu!r}")
    times = np.empty(N + 1)
    times[0] = 0.0
    with np.errstate(divide="ignore"):
        times[1:] = np.exp(2.0 * nu * np.log(k[1:] / N))
    times[N] = 1.0
    deltas = np.diff(times)
    if np.any(deltas <= 0):
        raise ValueError("partition is not strictly increasing (N too large for nu)")
    return Partition(times, deltas, scheme, float(nu))


def make_rng(seed: int) -> np.random.Generator:
    """Generator used for all driving samples; Philox keyed by a 64-bit seed."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed))


def _polar_normals(rng: np.random.Generator, count: int) -> np.ndarray:
    # Marsaglia polar method. Uniform pairs are consumed strictly in stream
    # order, so the output does not depend on the batch size.
    out = np.empty(count)
    filled = 0
    while filled < count:
        need = count - filled
        batch = max(64, int(need * 0.65) + 16)
        u = rng.random(2 * batch) * 2.0 - 1.0
        x, y = u[0::2], u[1::2]
        s = x * x + y * y
        ok = (s < 1.0) & (s > 0.0)
        x, y, s = x[ok], y[ok], s[ok]
        f = np.sqrt(-2.0 * np.log(s) / s)
        pairs = np.empty(2 * len(s))
        pairs[0::2] = x * f
        pairs[1::2] = y * f
        take = min(len(pairs), need)
        out[filled:filled + take] = pairs[:take]
        filled += take
    return out


def sample_driving(
    p: Partition,
    kappa: float,
    variant: Variant | str = Variant.GAUSSIAN,
    seed: int = 0,
) -> DrivingSample:
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    variant = Variant(variant)
    rng = make_rng(seed)
    scale = np.sqrt(kappa * p.deltas)
    if variant is Variant.GAUSSIAN:
        inc = _polar_normals(rng, p.N) * scale
    else:
        signs = np.where(rng.random(p.N) < 0.5, 1.0, -1.0)
        inc = signs * scale
    inc.setflags(write=False)
    return DrivingSample(float(kappa), inc, variant, int(seed), p)


def increments_from(values: Sequence[float], p: Partition, kappa: float = 1.0) -> DrivingSample:
    """Wrap externally chosen increments (used by tests and hand-built examples)."""
    inc = np.asarray(values, dtype=np.float64)
    if len(inc) != p.N:
        raise ValueError(f"expected {p.N} increments, got {len(inc)}")
    return DrivingSample(float(kappa), inc, Variant.GAUSSIAN, 0, p)

