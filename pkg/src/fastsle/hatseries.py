"""Truncated hat power series.

For a map ``f`` with ``f(z) = z + O(1)`` at infinity, ``fhat(w) = 1/f(1/w)`` is
analytic at ``w = 0`` with ``fhat(w) = w + a_2 w^2 + ...``. Hat series compose
like the maps themselves, ``(f o g)^ = fhat o ghat``, which is what makes a
whole block of step maps cheap to evaluate far from the real axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .slitmaps import Kind, SlitMap

__all__ = [
    "HatSeries",
    "DegenerateEvaluation",
    "binomial_series",
    "hat_of_map",
    "identity",
    "shift_series",
    "sqrt_series",
    "compose",
    "mul_trunc",
    "eval_hat",
]


class DegenerateEvaluation(ArithmeticError):
    """The truncated series vanished or overflowed at the requested point."""


@dataclass(frozen=True, eq=False)
class HatSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64)
        if c.ndim != 1 or len(c) < 2:
            raise ValueError("a hat series needs at least the coefficients a_0, a_1")
        if not np.all(np.isfinite(c)):
            raise ValueError("hat series coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def truncate(self, n: int) -> HatSeries:
        if n > self.order:
            raise ValueError(f"cannot raise order {self.order} to {n}")
        return HatSeries(self.coeffs[: n + 1])

    def extend(self, n: int) -> HatSeries:
        """Zero-pad to order ``n`` (the padded terms are *not* true coefficients)."""
        out = np.zeros(n + 1)
        out[: len(self.coeffs)] = self.coeffs
        return HatSeries(out)

    def __eq__(self, other):
        return isinstance(other, HatSeries) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self):
        return f"HatSeries(order={self.order}, coeffs={self.coeffs.tolist()})"


def binomial_series(alpha: float, c: float, n: int) -> np.ndarray:
    """Coefficients of ``(1 - c z)**(-alpha)`` up to ``z**n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = np.empty(n + 1)
    term = 1.0
    out[0] = 1.0
    for k in range(1, n + 1):
        term *= (alpha + k - 1) / k * c
        out[k] = term
    return out


def mul_trunc(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Product truncated at ``z**n``.

    Coefficient k only ever sees ``a[:k+1]`` and ``b[:k+1]``, so the result
    does not depend on how far either input extends beyond ``n``.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m = min(n, len(a) + len(b) - 2)
    out = np.zeros(n + 1)
    for k in range(m + 1):
        lo = max(0, k - len(b) + 1)
        hi = min(k, len(a) - 1)
        if lo <= hi:
            out[k] = np.dot(a[lo:hi + 1], b[k - hi:k - lo + 1][::-1])
    return out


def identity(n: int) -> HatSeries:
    c = np.zeros(n + 1)
    c[1] = 1.0
    return HatSeries(c)


def shift_series(delta: float, n: int) -> HatSeries:
    """Hat series of ``z -> z + delta``, i.e. ``w / (1 + delta*w)``."""
    c = np.zeros(n + 1)
    c[1:] = (-delta) ** np.arange(n)
    return HatSeries(c)


def sqrt_series(dcap: float, n: int) -> HatSeries:
    """Hat series of ``z -> sqrt(z**2 - 4*dcap)``, i.e. ``w / sqrt(1 - 4*dcap*w**2)``."""
    half = binomial_series(0.5, 4.0 * dcap, (n - 1) // 2)
    c = np.zeros(n + 1)
    c[1::2] = half[: len(c[1::2])]
    return HatSeries(c)


def hat_of_map(m: SlitMap, n: int) -> HatSeries:
    if n < 1:
        raise ValueError(f"order must be at least 1, got {n}")
    if m.kind is Kind.TILTED:
        left = binomial_series(1.0 - m.alpha, -m.xl, n - 1)
        right = binomial_series(m.alpha, m.xr, n - 1)
        c = np.zeros(n + 1)
        c[1:] = mul_trunc(left, right, n - 1)
        return HatSeries(c)
    return compose(shift_series(m.delta, n), sqrt_series(m.dcap, n), n)


def compose(outer: HatSeries, inner: HatSeries, n: int | None = None) -> HatSeries:
    """Truncation of ``outer o inner`` at order ``n``.

    Horner's scheme in the inner series with truncation after every product.
    Because ``inner`` has no constant term the retained coefficients are exact.
    """
    if n is None:
        n = min(outer.order, inner.order)
    if outer.coeffs[0] != 0 or inner.coeffs[0] != 0:
        raise ValueError("composition requires series with a_0 = 0")
    if outer.order < n or inner.order < n:
        raise ValueError(f"both series must have order >= {n}")
    a = outer.coeffs
    s = inner.coeffs[: n + 1]
    acc = np.zeros(n + 1)
    acc[0] = a[n]
    for j in range(n - 1, -1, -1):
        acc = mul_trunc(acc, s, n)
        acc[0] += a[j]
    return HatSeries(acc)


def eval_hat(S: HatSeries, z: complex) -> complex:
    """Far-field value ``1 / sum_j a_j z**(-j)``."""
    z = complex(z)
    if z == 0:
        raise DegenerateEvaluation("cannot evaluate a hat series at z = 0")
    w = 1.0 / z
    a = S.coeffs
    s = complex(a[-1])
    for j in range(len(a) - 2, -1, -1):
        s = s * w + a[j]
    if s == 0 or not (np.isfinite(s.real) and np.isfinite(s.imag)):
        raise DegenerateEvaluation(f"truncated hat series is {s} at z={z}")
    return 1.0 / s
