"""Pure-Python kernels; same interface and algorithms as ``_kernels.pyx``.

Maps are packed as ``kinds`` (int8, 0 = tilted, 1 = vertical) and ``params``
(float64, shape (N, 5)) with columns ``alpha, xl, xr, delta, dcap``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

BACKEND = "python"

ALPHA, XL, XR, DELTA, DCAP = range(5)
NEWTON_MAXIT = 100
# Halley converges cubically, so a step this small leaves ~1e-15
ROOT_TOL = 1e-5


class RadiusError(ArithmeticError):
    pass


def _eval(kind, p, z):
    if not z.imag > 0:
        z = complex(z.real, 0.0)
    if kind == 0:
        a = p[0]
        return cmath.exp((1.0 - a) * cmath.log(z + p[1]) + a * cmath.log(z - p[2]))
    return cmath.sqrt(z - p[2]) * cmath.sqrt(z + p[1]) + p[3]


def _rows(kinds, params):
    return [int(k) for k in kinds], [tuple(r) for r in params.tolist()]


def chain(kinds, params, lo, hi, z):
    """Apply maps ``hi-1, hi-2, ..., lo`` (innermost first) to ``z``."""
    ks, ps = _rows(kinds[lo:hi], params[lo:hi])
    z = complex(z)
    for i in range(hi - lo - 1, -1, -1):
        z = _eval(ks[i], ps[i], z)
    return z


def trace_baseline(kinds, params, indices):
    ks, ps = _rows(kinds, params)
    out = np.empty(len(indices), dtype=np.complex128)
    for j, k in enumerate(indices.tolist()):
        z = 0j
        for i in range(k - 1, -1, -1):
            z = _eval(ks[i], ps[i], z)
        out[j] = z
    return out


def _hat_eval(c, z):
    w = 1.0 / z
    s = complex(c[-1])
    for j in range(len(c) - 2, -1, -1):
        s = s * w + c[j]
    r = 1.0 / s
    if not r.imag > 0:
        r = complex(r.real, 0.0)
    return r


def trace_fast(kinds, params, coeffs, radii, b, indices, L):
    ks, ps = _rows(kinds, params)
    cs = [list(r) for r in coeffs.tolist()]
    thresholds = (np.asarray(radii) * L).tolist()
    out = np.empty(len(indices), dtype=np.complex128)
    for j, k in enumerate(indices.tolist()):
        m = k // b
        z = 0j
        for i in range(k - 1, m * b - 1, -1):
            z = _eval(ks[i], ps[i], z)
        for blk in range(m - 1, -1, -1):
            if abs(z) >= thresholds[blk]:
                z = _hat_eval(cs[blk], z)
            else:
                for i in range((blk + 1) * b - 1, blk * b - 1, -1):
                    z = _eval(ks[i], ps[i], z)
        out[j] = z
    return out


def _square_shifted(S, m):
    U = [0.0] * (m + 1)
    for k in range(2, m + 1):
        t = 0.0
        i = 1
        while 2 * i < k:
            t += S[i] * S[k - i]
            i += 1
        t *= 2.0
        if 2 * i == k:
            t += S[i] * S[i]
        U[k] = t
    return U


def _mul_shifted(S, Q, n):
    out = [0.0] * (n + 1)
    for k in range(1, n + 1):
        t = 0.0
        for i in range(1, k + 1):
            t += S[i] * Q[k - i]
        out[k] = t
    return out


def _miller_pow(F, e, m):
    # F**e to degree m for F[0] == 1
    P = [1.0] * (m + 1)
    for k in range(1, m + 1):
        t0 = t1 = 0.0
        for j in range(1, k + 1):
            t0 += j * F[j] * P[k - j]
            t1 += F[j] * P[k - j]
        P[k] = (e + 1.0) * t0 / k - t1
    return P


def _compose_map(kind, p, S, n):
    """``hat(h) o S`` to order ``n`` for a single step map, in O(n^2)."""
    U = _square_shifted(S, n - 1)
    if kind == 0:
        # S * Q with Q = (1 + xl S)**(a-1) (1 - xr S)**-a, from E Q' = D Q
        a, xl, xr = p[0], p[1], p[2]
        A = (a - 1.0) * xl + a * xr
        B = xl * xr
        E = [1.0] + [(xl - xr) * S[k] - B * U[k] for k in range(1, n - 1)]
        D = [(k + 1) * (A * S[k + 1] + 0.5 * B * U[k + 1]) for k in range(n - 1)]
        Q = [1.0] * n
        KQ = [0.0] * n
        for k in range(n - 1):
            t0 = 0.0
            for j in range(k + 1):
                t0 += D[j] * Q[k - j]
            t1 = 0.0
            for j in range(1, k + 1):
                t1 += E[j] * KQ[k - j + 1]
            KQ[k + 1] = t0 - t1
            Q[k + 1] = (t0 - t1) / (k + 1)
        return _mul_shifted(S, Q, n)
    # vertical: G = S (1 - 4 dcap S^2)**-1/2, then G / (1 + delta G)
    F = [1.0] + [-4.0 * p[4] * U[k] for k in range(1, n)]
    G = _mul_shifted(S, _miller_pow(F, -0.5, n - 1), n)
    F = [1.0] + [p[3] * G[k] for k in range(1, n)]
    return _mul_shifted(G, _miller_pow(F, -1.0, n - 1), n)


def _identity(n):
    c = [0.0] * (n + 1)
    c[1] = 1.0
    return c


def map_series(kinds, params, i, n):
    return np.array(_compose_map(int(kinds[i]), tuple(params[i].tolist()), _identity(n), n))


def _compose(a, s, n):
    acc = [0.0] * (n + 1)
    acc[0] = a[n]
    for j in range(n - 1, -1, -1):
        new = [0.0] * (n + 1)
        for k in range(1, n + 1):
            t = 0.0
            for i in range(0, k):
                t += acc[i] * s[k - i]
            new[k] = t
        new[0] = a[j]
        acc = new
    return acc


def compose(a, s, n):
    return np.array(_compose(list(a), list(s), n))


def _halley_step(a, b, c, target, u):
    # f(u) = a*u + b*log(exp(u) + c) - target is convex and increasing
    e = math.exp(u)
    q = e / (e + c)
    f = a * u + b * math.log(e + c) - target
    f1 = a + b * q
    f2 = b * q * (1.0 - q)
    r = f * f2 / (2.0 * f1 * f1)
    st = f / f1 if r > 0.5 else f / (f1 * (1.0 - r))
    if abs(st) < 1e-3:
        e_new = e * (1.0 - st * (1.0 - st * (0.5 - st / 6.0)))
    else:
        e_new = math.exp(u - st)
    return st, e_new


def _first_guess(T, logT, shift, dcap, edge):
    x = T - shift
    if x > 4.0 * edge:
        eps = 1.0 - (x + 2.0 * dcap / x - edge) / T
        if abs(eps) < 0.5:
            return logT - eps * (1.0 + eps * (0.5 + eps * (1.0 / 3.0 + 0.25 * eps)))
    return logT


def _pull_back(kind, p, T, S):
    """Thresholds at the input of a map given those (T right, S left) at its output."""
    xl, xr = p[1], p[2]
    if kind == 1:
        u = T - p[3]
        T = xr if u <= 0 else math.hypot(u, xr)
        u = S + p[3]
        S = xl if u <= 0 else math.hypot(u, xl)
        return T, S
    a, c = p[0], xl + xr
    tr, tl = math.log(T), math.log(S)
    ur = _first_guess(T, tr, p[3], p[4], xr)
    ul = _first_guess(S, tl, -p[3], p[4], xl)
    for _ in range(NEWTON_MAXIT):
        sr, er = _halley_step(a, 1.0 - a, c, tr, ur)
        sl, el = _halley_step(1.0 - a, a, c, tl, ul)
        ur -= sr
        ul -= sl
        if not (math.isfinite(ur) and math.isfinite(ul)):
            break
        if abs(sr) <= ROOT_TOL * (1.0 + abs(ur)) and abs(sl) <= ROOT_TOL * (1.0 + abs(ul)):
            return xr + er, xl + el
    raise RadiusError("real-branch inversion did not converge")


def _sides(ks, ps):
    # output real and on the input's side of 0; for a vertical outer map that
    # means pulling its real zero back too
    T, S = (0.0, 0.0) if ks[0] == 1 else (ps[0][2], ps[0][1])
    if ks[0] == 1:
        T, S = _pull_back(1, ps[0], T, S)
    for i in range(1, len(ks)):
        T, S = _pull_back(ks[i], ps[i], T, S)
    return T, S


def radius_sides(kinds, params, lo, hi):
    """Exact ``(R+, R-)`` for the composition of maps ``lo .. hi-1``."""
    ks, ps = _rows(kinds[lo:hi], params[lo:hi])
    return _sides(ks, ps)


def build_blocks(kinds, params, b, n, safety):
    ks, ps = _rows(kinds, params)
    nb = len(ks) // b
    coeffs = np.zeros((nb, n + 1))
    radii = np.empty(nb)
    for j in range(nb):
        lo, hi = j * b, (j + 1) * b
        acc = _identity(n)
        for i in range(hi - 1, lo - 1, -1):
            acc = _compose_map(ks[i], ps[i], acc, n)
        coeffs[j] = acc
        rp, rm = _sides(ks[lo:hi], ps[lo:hi])
        radii[j] = max(rp, rm) * safety
    return coeffs, radii
