"""Blocks of consecutive step maps.

Block ``j`` is ``H_j = h_{jb} o h_{jb+1} o ... o h_{jb+b-1}`` (0-based map
indices). It carries the truncated hat series of ``H_j`` and a radius ``R_j``;
for ``|z| >= L*R_j`` the block is evaluated from its series instead of map by
map.

``R_j`` is the smallest radius outside of which ``H_j`` is real on the real
axis *and* keeps the sign of its argument. The second condition keeps ``H_j``
free of real zeros beyond ``R_j``, so that ``1/H_j(1/w)`` is analytic for
``|w| < 1/R_j``. Tilted maps satisfy it automatically; a vertical map
``sqrt(z^2 - 4 Delta) + delta`` vanishes at ``-sign(delta) sqrt(delta^2 + 4 Delta)``,
outside its cut, and that point has to be included.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .hatseries import HatSeries, eval_hat
from .slitmaps import PackedMaps, SlitMap, eval_map, eval_real_outside_cut

__all__ = [
    "RADIUS_SAFETY",
    "RadiusError",
    "Block",
    "BlockSet",
    "build_blocks",
    "compute_radius",
    "radius_sides",
    "realness_predicate",
    "eval_block",
]

RADIUS_SAFETY = 1.0 + 1e-9
MAX_DOUBLINGS = 200


class RadiusError(ArithmeticError):
    """Block radius could not be determined."""


@dataclass(frozen=True)
class Block:
    series: HatSeries
    radius: float
    first: int
    last: int

    @property
    def count(self) -> int:
        return self.last - self.first + 1


@dataclass(frozen=True, eq=False)
class BlockSet(Sequence):
    """All full blocks of a map sequence, stored as arrays for the kernels."""

    coeffs: np.ndarray
    radii: np.ndarray
    b: int
    n: int

    def __len__(self) -> int:
        return len(self.radii)

    def __getitem__(self, j):
        if isinstance(j, slice):
            return [self[i] for i in range(*j.indices(len(self)))]
        if j < 0:
            j += len(self)
        if not 0 <= j < len(self):
            raise IndexError(j)
        return Block(HatSeries(self.coeffs[j]), float(self.radii[j]), j * self.b, (j + 1) * self.b - 1)


def build_blocks(maps, b: int, n: int, safety: float = RADIUS_SAFETY) -> BlockSet:
    """Group maps into ``len(maps) // b`` full blocks; a trailing partial group is left out."""
    if b < 1 or n < 1:
        raise ValueError(f"block size and order must be >= 1, got b={b}, n={n}")
    pm = PackedMaps.from_maps(maps)
    if len(pm) == 0:
        raise ValueError("no maps to block")
    try:
        coeffs, radii = kernels.build_blocks(pm.kinds, pm.params, int(b), int(n), float(safety))
    except ArithmeticError as exc:
        raise RadiusError(str(exc)) from exc
    return BlockSet(coeffs, radii, int(b), int(n))


def radius_sides(maps) -> tuple[float, float]:
    """``(R+, R-)`` without the safety factor.

    Works outermost-first: the smallest real value each map must receive on
    either side, so that everything downstream stays off the cuts and the
    final value stays on its side of 0, is pulled back through the inverse of
    the real branch of the next inner map.
    """
    pm = PackedMaps.from_maps(maps)
    if len(pm) == 0:
        raise ValueError("empty map sequence")
    try:
        return kernels.radius_sides(pm.kinds, pm.params, 0, len(pm))
    except ArithmeticError as exc:
        raise RadiusError(str(exc)) from exc


def realness_predicate(maps: Sequence[SlitMap], x: float) -> bool:
    """True if ``x`` propagates innermost-first through ``maps`` without entering
    a cut and the result is not of the opposite sign to ``x``."""
    x0 = x
    for m in reversed(list(maps)):
        if -m.xl < x < m.xr:
            return False
        x = eval_real_outside_cut(m, x)
    return x * x0 >= 0


def _side_ok(maps: Sequence[SlitMap], r: float, sign: int) -> bool:
    # side-wise version of the predicate, monotone in r: every intermediate
    # value must clear the cut on the starting side
    x = sign * r
    for m in reversed(maps):
        if (sign > 0 and x < m.xr) or (sign < 0 and x > -m.xl):
            return False
        x = eval_real_outside_cut(m, x)
    return sign * x >= 0


def _bisect_side(maps: Sequence[SlitMap], sign: int, rtol: float) -> float:
    hi = max(m.cut_radius for m in maps)
    for _ in range(MAX_DOUBLINGS):
        if _side_ok(maps, hi, sign):
            break
        hi *= 2.0
    else:
        raise RadiusError("radius bracketing exceeded the doubling limit")
    lo = 0.0
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if _side_ok(maps, mid, sign):
            hi = mid
        else:
            lo = mid
    return hi


def compute_radius(maps, method: str = "invert", safety: float = RADIUS_SAFETY) -> float:
    """Block radius ``max(R+, R-)`` inflated by ``safety``.

    ``method="invert"`` pulls the cut endpoints back through the real
    branches (exact, used by ``build_blocks``); ``method="bisect"`` brackets
    by doubling and bisects the monotone realness test to relative 1e-12.
    """
    if method == "invert":
        rp, rm = radius_sides(maps)
    elif method == "bisect":
        ms = list(maps)
        if not ms:
            raise ValueError("empty map sequence")
        rp = _bisect_side(ms, +1, 1e-12)
        rm = _bisect_side(ms, -1, 1e-12)
    else:
        raise ValueError(f"unknown method {method!r}")
    r = max(rp, rm) * safety
    if not (r > 0 and math.isfinite(r)):
        raise RadiusError(f"invalid radius {r}")
    return r


def eval_block(blk: Block, maps: Sequence[SlitMap], z: complex, L: float) -> complex:
    """``H_j(z)``: from the hat series when ``|z| >= L*R_j``, else map by map."""
    if not L > 1:
        raise ValueError(f"L must exceed 1, got {L!r}")
    z = complex(z)
    if abs(z) >= L * blk.radius:
        w = eval_hat(blk.series, z)
        return w if w.imag > 0 else complex(w.real, 0.0)
    for i in range(blk.last, blk.first - 1, -1):
        z = eval_map(maps[i], z)
    return z
