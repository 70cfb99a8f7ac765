"""Elementary conformal maps for one time step.

Each step map ``h`` sends the upper half plane onto the half plane minus a
short slit with hydrodynamic normalisation ``h(z) = z + delta - 2*Delta/z + ...``.

tilted
    ``h(z) = (z + xl)**(1 - alpha) * (z - xr)**alpha``, a straight slit at
    angle ``alpha*pi`` whose tip is ``h(0)``. The interval ``[-xl, xr]`` is
    welded onto the slit.
vertical
    ``h(z) = sqrt(z**2 - 4*Delta) + delta``, a vertical slit based at ``delta``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Kind",
    "SlitMap",
    "solve_alpha",
    "make_tilted",
    "make_vertical",
    "make_map",
    "eval_map",
    "eval_real_outside_cut",
    "cut_interval",
    "tip",
    "c_alpha",
    "PackedMaps",
]


class Kind(str, Enum):
    TILTED = "tilted"
    VERTICAL = "vertical"


@dataclass(frozen=True)
class SlitMap:
    kind: Kind
    delta: float
    dcap: float
    alpha: float = 0.5
    xl: float = 0.0
    xr: float = 0.0

    @property
    def cut_radius(self) -> float:
        return max(self.xl, self.xr)


def c_alpha(alpha: float) -> float:
    """Driving speed of the tilted slit: ``U_t = c_alpha * sqrt(t)``."""
    return 2.0 * (1.0 - 2.0 * alpha) / math.sqrt(alpha * (1.0 - alpha))


def solve_alpha(delta: float, dcap: float) -> float:
    """Slit angle (in units of pi) whose driving function moves by ``delta`` in time ``dcap``.

    Root of ``16a^2 + v a^2 - 16a - v a + 4 = 0`` with ``v = delta^2/dcap``;
    ``alpha < 1/2`` for positive ``delta``.
    """
    if not dcap > 0:
        raise ValueError(f"dcap must be positive, got {dcap!r}")
    if delta == 0:
        return 0.5
    v = delta * delta / dcap
    half_width = 0.5 * math.sqrt(v / (16.0 + v))
    return 0.5 - half_width if delta > 0 else 0.5 + half_width


def make_tilted(delta: float, dcap: float) -> SlitMap:
    alpha = solve_alpha(delta, dcap)
    xl = 2.0 * math.sqrt(dcap * (1.0 - alpha) / alpha)
    xr = 2.0 * math.sqrt(dcap * alpha / (1.0 - alpha))
    return SlitMap(Kind.TILTED, float(delta), float(dcap), alpha, xl, xr)


def make_vertical(delta: float, dcap: float) -> SlitMap:
    if not dcap > 0:
        raise ValueError(f"dcap must be positive, got {dcap!r}")
    w = 2.0 * math.sqrt(dcap)
    return SlitMap(Kind.VERTICAL, float(delta), float(dcap), 0.5, w, w)


def make_map(kind: Kind | str, delta: float, dcap: float) -> SlitMap:
    if Kind(kind) is Kind.TILTED:
        return make_tilted(delta, dcap)
    return make_vertical(delta, dcap)


def eval_map(m: SlitMap, z: complex) -> complex:
    """Evaluate the step map at a point of the closed upper half plane.

    Points on the real axis are taken as limits from above.
    """
    z = complex(z)
    if not z.imag > 0:
        # -0.0 or a rounding-level negative part would flip the log branch
        z = complex(z.real, 0.0)
    if m.kind is Kind.TILTED:
        return cmath.exp((1.0 - m.alpha) * cmath.log(z + m.xl) + m.alpha * cmath.log(z - m.xr))
    return cmath.sqrt(z - m.xr) * cmath.sqrt(z + m.xl) + m.delta


def eval_real_outside_cut(m: SlitMap, x: float) -> float:
    """Real value of the map on the real axis outside ``(-xl, xr)``."""
    if -m.xl < x < m.xr:
        raise ValueError(f"x={x!r} lies inside the cut ({-m.xl!r}, {m.xr!r})")
    if m.kind is Kind.TILTED:
        if x >= m.xr:
            return (x + m.xl) ** (1.0 - m.alpha) * (x - m.xr) ** m.alpha
        return -((-x - m.xl) ** (1.0 - m.alpha)) * (m.xr - x) ** m.alpha
    r = math.sqrt((x - m.xr) * (x + m.xl))
    return (r if x > 0 else -r) + m.delta


def cut_interval(m: SlitMap) -> tuple[float, float]:
    """``(xl, xr)`` such that ``[-xl, xr]`` is welded onto the slit."""
    return m.xl, m.xr


def tip(m: SlitMap) -> complex:
    """Image of the origin; the slit tip for the tilted map."""
    return eval_map(m, 0j)


@dataclass(frozen=True, eq=False)
class PackedMaps:
    """A sequence of step maps stored column-wise for the kernels.

    ``params`` columns are ``alpha, xl, xr, delta, dcap``; ``kinds`` is 0 for
    tilted and 1 for vertical maps.
    """

    kinds: np.ndarray
    params: np.ndarray

    def __len__(self) -> int:
        return len(self.kinds)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return PackedMaps(np.ascontiguousarray(self.kinds[i]), np.ascontiguousarray(self.params[i]))
        a, xl, xr, d, dcap = self.params[i].tolist()
        kind = Kind.TILTED if self.kinds[i] == 0 else Kind.VERTICAL
        return SlitMap(kind, d, dcap, a, xl, xr)

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @classmethod
    def from_maps(cls, maps) -> PackedMaps:
        if isinstance(maps, PackedMaps):
            return maps
        maps = list(maps)
        kinds = np.array([0 if m.kind is Kind.TILTED else 1 for m in maps], dtype=np.int8)
        params = np.array([[m.alpha, m.xl, m.xr, m.delta, m.dcap] for m in maps], dtype=np.float64)
        return cls(kinds, params.reshape(len(maps), 5))

    @classmethod
    def from_increments(cls, kind: Kind | str, deltas, dcaps) -> PackedMaps:
        """Vectorised ``make_map`` over arrays of increments and capacities."""
        kind = Kind(kind)
        delta = np.asarray(deltas, dtype=np.float64)
        dcap = np.asarray(dcaps, dtype=np.float64)
        if np.any(~(dcap > 0)):
            raise ValueError("all dcap values must be positive")
        params = np.empty((len(delta), 5))
        params[:, 3] = delta
        params[:, 4] = dcap
        if kind is Kind.TILTED:
            v = delta * delta / dcap
            hw = 0.5 * np.sqrt(v / (16.0 + v))
            alpha = np.where(delta > 0, 0.5 - hw, np.where(delta < 0, 0.5 + hw, 0.5))
            params[:, 0] = alpha
            params[:, 1] = 2.0 * np.sqrt(dcap * (1.0 - alpha) / alpha)
            params[:, 2] = 2.0 * np.sqrt(dcap * alpha / (1.0 - alpha))
            kinds = np.zeros(len(delta), dtype=np.int8)
        else:
            w = 2.0 * np.sqrt(dcap)
            params[:, 0] = 0.5
            params[:, 1] = w
            params[:, 2] = w
            kinds = np.ones(len(delta), dtype=np.int8)
        return cls(kinds, params)
