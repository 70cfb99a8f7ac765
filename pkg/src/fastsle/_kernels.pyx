# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; interface mirrors ``_pykernels``."""

import numpy as np
cimport numpy as cnp

from libc.complex cimport cexp, clog, csqrt, cabs, creal, cimag
from libc.math cimport exp, log, hypot, fabs, isfinite, atan2, cos, sin

cnp.import_array()

BACKEND = "cython"

cdef enum:
    NEWTON_MAXIT = 100

# cubic convergence: once a Halley step is this small the error left is ~1e-18
cdef double ROOT_TOL = 1e-5


class RadiusError(ArithmeticError):
    pass


cdef extern from "<complex.h>" nogil:
    double complex CMPLX(double, double)


cdef inline double complex eval1(signed char kind, const double[:, ::1] p, Py_ssize_t i,
                                 double complex z) noexcept nogil:
    cdef double x = creal(z), y = cimag(z), a, u1, u2, re, im, r
    if not y > 0:
        y = 0.0
    if kind == 0:
        # exp((1-a) Log(z+xl) + a Log(z-xr)) in real arithmetic
        a = p[i, 0]
        u1 = x + p[i, 1]
        u2 = x - p[i, 2]
        re = 0.5 * ((1.0 - a) * log(u1 * u1 + y * y) + a * log(u2 * u2 + y * y))
        im = (1.0 - a) * atan2(y, u1) + a * atan2(y, u2)
        r = exp(re)
        return CMPLX(r * cos(im), r * sin(im))
    z = CMPLX(x, y)
    return csqrt(z - p[i, 2]) * csqrt(z + p[i, 1]) + p[i, 3]


cdef inline double complex hat_eval(const double[:, ::1] c, Py_ssize_t j, Py_ssize_t n,
                                    double complex z) noexcept nogil:
    cdef double x = creal(z), y = cimag(z), d, wr, wi, sr, si, t
    cdef Py_ssize_t k
    d = x * x + y * y
    wr = x / d
    wi = -y / d
    sr = c[j, n]
    si = 0.0
    for k in range(n - 1, -1, -1):
        t = sr * wr - si * wi + c[j, k]
        si = sr * wi + si * wr
        sr = t
    d = sr * sr + si * si
    si = -si / d
    if not si > 0:
        si = 0.0
    return CMPLX(sr / d, si)


def chain(const signed char[::1] kinds, const double[:, ::1] params,
          Py_ssize_t lo, Py_ssize_t hi, double complex z):
    cdef Py_ssize_t i
    for i in range(hi - 1, lo - 1, -1):
        z = eval1(kinds[i], params, i, z)
    return z


def trace_baseline(const signed char[::1] kinds, const double[:, ::1] params,
                   const long long[::1] indices):
    cdef Py_ssize_t m = indices.shape[0], j, i
    cdef double complex z
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for j in range(m):
            z = 0
            for i in range(indices[j] - 1, -1, -1):
                z = eval1(kinds[i], params, i, z)
            o[j] = z
    return out


def trace_fast(const signed char[::1] kinds, const double[:, ::1] params,
               const double[:, ::1] coeffs, const double[::1] radii, Py_ssize_t b,
               const long long[::1] indices, double L):
    cdef Py_ssize_t m = indices.shape[0], n = coeffs.shape[1] - 1
    cdef Py_ssize_t nb = radii.shape[0]
    cdef Py_ssize_t j, i, k, blk, mm
    cdef double complex z
    thr_arr = np.empty(nb)
    cdef double[::1] thr = thr_arr
    for blk in range(nb):
        thr[blk] = (radii[blk] * L) * (radii[blk] * L)
    out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for j in range(m):
            k = indices[j]
            mm = k // b
            z = 0
            for i in range(k - 1, mm * b - 1, -1):
                z = eval1(kinds[i], params, i, z)
            for blk in range(mm - 1, -1, -1):
                if creal(z) * creal(z) + cimag(z) * cimag(z) >= thr[blk]:
                    z = hat_eval(coeffs, blk, n, z)
                else:
                    for i in range((blk + 1) * b - 1, blk * b - 1, -1):
                        z = eval1(kinds[i], params, i, z)
            o[j] = z
    return out


cdef void miller_pow(const double* F, double e, Py_ssize_t m, double* P) noexcept nogil:
    # P = F**e to degree m for F[0] == 1 (J.C.P. Miller recurrence)
    cdef Py_ssize_t k, j
    cdef double t0, t1
    P[0] = 1.0
    for k in range(1, m + 1):
        t0 = 0.0
        t1 = 0.0
        for j in range(1, k + 1):
            t0 += j * F[j] * P[k - j]
            t1 += F[j] * P[k - j]
        P[k] = (e + 1.0) * t0 / k - t1


cdef void mul_shifted(const double* S, const double* Q, Py_ssize_t n, double* out) noexcept nogil:
    # out = S*Q to degree n for S[0] == 0
    cdef Py_ssize_t k, i
    cdef double t0, t1
    out[0] = 0.0
    for k in range(1, n + 1):
        t0 = 0.0
        t1 = 0.0
        i = 1
        while i < k:
            t0 += S[i] * Q[k - i]
            t1 += S[i + 1] * Q[k - i - 1]
            i += 2
        if i == k:
            t0 += S[i] * Q[0]
        out[k] = t0 + t1


cdef void square_shifted(const double* S, Py_ssize_t m, double* U) noexcept nogil:
    # U = S*S to degree m for S[0] == 0, using the symmetry of the products
    cdef Py_ssize_t k, i
    cdef double t
    U[0] = 0.0
    U[1] = 0.0
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


cdef void compose_map(signed char kind, const double[:, ::1] p, Py_ssize_t r, Py_ssize_t n,
                      const double* S, double* out, double* w) noexcept nogil:
    # out = hat(h_r) o S to order n; w is scratch of 6*(n+1) doubles
    cdef double* U = w
    cdef double* E = w + (n + 1)
    cdef double* D = w + 2 * (n + 1)
    cdef double* Q = w + 3 * (n + 1)
    cdef double* KQ = w + 4 * (n + 1)
    cdef double* G = w + 5 * (n + 1)
    cdef Py_ssize_t k, j
    cdef double a, xl, xr, A, B, bl, t0, t1
    square_shifted(S, n - 1, U)
    if kind == 0:
        # out = S*Q with Q = (1 + xl S)**(a-1) * (1 - xr S)**-a. Q solves
        # E Q' = (A S' + B S S') Q with E = (1 + xl S)(1 - xr S),
        # A = (a-1) xl + a xr, B = xl xr.
        a = p[r, 0]
        xl = p[r, 1]
        xr = p[r, 2]
        A = (a - 1.0) * xl + a * xr
        B = xl * xr
        bl = xl - xr
        E[0] = 1.0
        for k in range(1, n - 1):
            E[k] = bl * S[k] - B * U[k]
        for k in range(n - 1):
            D[k] = (k + 1) * (A * S[k + 1] + 0.5 * B * U[k + 1])
        Q[0] = 1.0
        KQ[0] = 0.0
        for k in range(n - 1):
            # (k+1) Q_{k+1} = sum_j D_j Q_{k-j} - sum_{j>=1} E_j (k-j+1) Q_{k-j+1}
            t0 = 0.0
            t1 = 0.0
            for j in range(k + 1):
                t0 += D[j] * Q[k - j]
            for j in range(1, k + 1):
                t1 += E[j] * KQ[k - j + 1]
            KQ[k + 1] = t0 - t1
            Q[k + 1] = (t0 - t1) / (k + 1)
        mul_shifted(S, Q, n, out)
        return
    # vertical: G = S * (1 - 4 dcap S^2)**-1/2, then G / (1 + delta G)
    a = -4.0 * p[r, 4]
    E[0] = 1.0
    for k in range(1, n):
        E[k] = a * U[k]
    miller_pow(E, -0.5, n - 1, Q)
    mul_shifted(S, Q, n, G)
    a = p[r, 3]
    for k in range(1, n):
        E[k] = a * G[k]
    miller_pow(E, -1.0, n - 1, Q)
    mul_shifted(G, Q, n, out)


cdef void compose_tilted4(const double[:, ::1] p, const Py_ssize_t* r, Py_ssize_t n,
                          const double* S, double* out, double* w) noexcept nogil:
    # compose_map for four tilted maps at once; series are interleaved,
    # coefficient k of lane l at [4*k + l]. Same recurrence as compose_map,
    # the lanes only give the FPU independent work.
    cdef double* U = w
    cdef double* E = w + 4 * (n + 1)
    cdef double* D = w + 8 * (n + 1)
    cdef double* Q = w + 12 * (n + 1)
    cdef double* KQ = w + 16 * (n + 1)
    cdef double A[4]
    cdef double B[4]
    cdef double bl[4]
    cdef double t0[4]
    cdef double t1[4]
    cdef Py_ssize_t k, j, i, l
    cdef double a, xl, xr
    for l in range(4):
        a = p[r[l], 0]
        xl = p[r[l], 1]
        xr = p[r[l], 2]
        A[l] = (a - 1.0) * xl + a * xr
        B[l] = xl * xr
        bl[l] = xl - xr
    for l in range(4):
        U[l] = 0.0
        U[4 + l] = 0.0
    for k in range(2, n):
        for l in range(4):
            t0[l] = 0.0
        i = 1
        while 2 * i < k:
            for l in range(4):
                t0[l] += S[4 * i + l] * S[4 * (k - i) + l]
            i += 1
        for l in range(4):
            t0[l] *= 2.0
        if 2 * i == k:
            for l in range(4):
                t0[l] += S[4 * i + l] * S[4 * i + l]
        for l in range(4):
            U[4 * k + l] = t0[l]
    for k in range(1, n - 1):
        for l in range(4):
            E[4 * k + l] = bl[l] * S[4 * k + l] - B[l] * U[4 * k + l]
    for k in range(n - 1):
        for l in range(4):
            D[4 * k + l] = (k + 1) * (A[l] * S[4 * (k + 1) + l] + 0.5 * B[l] * U[4 * (k + 1) + l])
    for l in range(4):
        Q[l] = 1.0
        KQ[l] = 0.0
    for k in range(n - 1):
        for l in range(4):
            t0[l] = 0.0
            t1[l] = 0.0
        for j in range(k + 1):
            for l in range(4):
                t0[l] += D[4 * j + l] * Q[4 * (k - j) + l]
        for j in range(1, k + 1):
            for l in range(4):
                t1[l] += E[4 * j + l] * KQ[4 * (k - j + 1) + l]
        for l in range(4):
            KQ[4 * (k + 1) + l] = t0[l] - t1[l]
            Q[4 * (k + 1) + l] = (t0[l] - t1[l]) / (k + 1)
    for l in range(4):
        out[l] = 0.0
    for k in range(1, n + 1):
        for l in range(4):
            t0[l] = 0.0
        for i in range(1, k + 1):
            for l in range(4):
                t0[l] += S[4 * i + l] * Q[4 * (k - i) + l]
        for l in range(4):
            out[4 * k + l] = t0[l]


cdef void compose_into(const double* a, const double* s, Py_ssize_t n,
                       double* out, double* tmp) noexcept nogil:
    # Horner in s; out and tmp are scratch of length n+1, result left in out
    cdef Py_ssize_t j, k, i
    cdef double t
    for k in range(n + 1):
        out[k] = 0.0
    out[0] = a[n]
    for j in range(n - 1, -1, -1):
        for k in range(n, 0, -1):
            t = 0.0
            for i in range(k):
                t += out[i] * s[k - i]
            tmp[k] = t
        tmp[0] = a[j]
        for k in range(n + 1):
            out[k] = tmp[k]


def compose(a, s, Py_ssize_t n):
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] sv = np.ascontiguousarray(s, dtype=np.float64)
    res = np.empty(n + 1)
    cdef double[::1] rv = res
    tmp = np.empty(n + 1)
    cdef double[::1] tv = tmp
    compose_into(&av[0], &sv[0], n, &rv[0], &tv[0])
    return res


cdef inline double halley_step(double a, double b, double c, double target, double u,
                               double* e_out) noexcept nogil:
    # step for f(u) = a*u + b*log(exp(u) + c) - target (convex, increasing);
    # e_out receives exp(u - step)
    cdef double e = exp(u), q, f, f1, f2, r, st
    q = e / (e + c)
    f = a * u + b * log(e + c) - target
    f1 = a + b * q
    f2 = b * q * (1.0 - q)
    r = f * f2 / (2.0 * f1 * f1)
    if r > 0.5:
        st = f / f1
    else:
        st = f / (f1 * (1.0 - r))
    if fabs(st) < 1e-3:
        e_out[0] = e * (1.0 - st * (1.0 - st * (0.5 - st / 6.0)))
    else:
        e_out[0] = exp(u - st)
    return st


cdef inline double first_guess(double T, double logT, double shift, double dcap, double edge) noexcept nogil:
    # log of the offset past the cut edge, from h^-1(T) ~ T - shift + 2*dcap/(T - shift)
    cdef double x = T - shift, eps
    if x > 4.0 * edge:
        eps = 1.0 - (x + 2.0 * dcap / x - edge) / T
        if fabs(eps) < 0.5:
            # log(T (1 - eps)) to a few terms; only a starting point
            return logT - eps * (1.0 + eps * (0.5 + eps * (1.0 / 3.0 + 0.25 * eps)))
    return logT


cdef int pull_back(signed char kind, const double[:, ::1] p, Py_ssize_t i,
                   double* T, double* S) noexcept nogil:
    """Replace the thresholds T (right) and S (left, as a magnitude) seen at
    the output of map i by the thresholds at its input."""
    cdef double a, xl = p[i, 1], xr = p[i, 2], c, tr, tl, ur, ul, sr, sl, u, er, el
    cdef int it
    if kind == 1:
        u = T[0] - p[i, 3]
        T[0] = xr if u <= 0 else hypot(u, xr)
        u = S[0] + p[i, 3]
        S[0] = xl if u <= 0 else hypot(u, xl)
        return 0
    a = p[i, 0]
    c = xl + xr
    tr = log(T[0])
    tl = log(S[0])
    ur = first_guess(T[0], tr, p[i, 3], p[i, 4], xr)
    ul = first_guess(S[0], tl, -p[i, 3], p[i, 4], xl)
    # right branch: x = xr + exp(u) solves (1-a) log(x + xl) + a log(x - xr) = log T
    # left branch:  s = xl + exp(u) solves (1-a) log(s - xl) + a log(s + xr) = log S
    for it in range(NEWTON_MAXIT):
        sr = halley_step(a, 1.0 - a, c, tr, ur, &er)
        sl = halley_step(1.0 - a, a, c, tl, ul, &el)
        ur -= sr
        ul -= sl
        if not (isfinite(ur) and isfinite(ul)):
            return -1
        # cubic convergence: the error left after a step of size s is O(s**3)
        if fabs(sr) <= ROOT_TOL * (1.0 + fabs(ur)) and fabs(sl) <= ROOT_TOL * (1.0 + fabs(ul)):
            T[0] = xr + er
            S[0] = xl + el
            return 0
    return -1


cdef int sides(const signed char[::1] kinds, const double[:, ::1] params,
               Py_ssize_t lo, Py_ssize_t hi, double* rp, double* rm) noexcept nogil:
    # the block output must be real and on the same side of 0 as the input;
    # a tilted map gets that for free outside its cut, a vertical one needs
    # its real zero pulled back as well
    cdef double T = params[lo, 2], S = params[lo, 1]
    cdef Py_ssize_t i
    if kinds[lo] == 1:
        T = 0.0
        S = 0.0
        pull_back(1, params, lo, &T, &S)
    for i in range(lo + 1, hi):
        if pull_back(kinds[i], params, i, &T, &S):
            return -1
    rp[0] = T
    rm[0] = S
    return 0


def radius_sides(const signed char[::1] kinds, const double[:, ::1] params,
                 Py_ssize_t lo, Py_ssize_t hi):
    cdef double rp, rm
    if sides(kinds, params, lo, hi, &rp, &rm):
        raise RadiusError("real-branch inversion did not converge")
    return rp, rm


cdef void compose_block(const signed char[::1] kinds, const double[:, ::1] params,
                        Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t n,
                        double* acc, double* res, double* w) noexcept nogil:
    cdef Py_ssize_t i, k
    for k in range(n + 1):
        acc[k] = 0.0
    acc[1] = 1.0
    for i in range(hi - 1, lo - 1, -1):
        compose_map(kinds[i], params, i, n, acc, res, w)
        for k in range(n + 1):
            acc[k] = res[k]


def build_blocks(const signed char[::1] kinds, const double[:, ::1] params,
                 Py_ssize_t b, Py_ssize_t n, double safety):
    cdef Py_ssize_t nb = kinds.shape[0] // b, j, i, k, l, lo, step
    cdef double rp, rm
    coeffs = np.zeros((nb, n + 1))
    radii = np.empty(nb)
    cdef double[:, ::1] cv = coeffs
    cdef double[::1] rv = radii
    scratch = np.zeros(30 * (n + 1))
    cdef double[::1] sc = scratch
    cdef double* acc = &sc[0]
    cdef double* res = &sc[4 * (n + 1)]
    cdef double* w = &sc[8 * (n + 1)]
    cdef Py_ssize_t r[4]
    cdef int bad = 0, tilted
    with nogil:
        j = 0
        while j < nb:
            tilted = j + 4 <= nb
            if tilted:
                for i in range(j * b, (j + 4) * b):
                    if kinds[i] != 0:
                        tilted = 0
                        break
            if tilted:
                for k in range(4 * (n + 1)):
                    acc[k] = 0.0
                for l in range(4):
                    acc[4 + l] = 1.0
                for step in range(b):
                    for l in range(4):
                        r[l] = (j + l + 1) * b - 1 - step
                    compose_tilted4(params, r, n, acc, res, w)
                    for k in range(4 * (n + 1)):
                        acc[k] = res[k]
                for l in range(4):
                    for k in range(n + 1):
                        cv[j + l, k] = acc[4 * k + l]
                j += 4
            else:
                compose_block(kinds, params, j * b, (j + 1) * b, n, acc, res, w)
                for k in range(n + 1):
                    cv[j, k] = acc[k]
                j += 1
        for j in range(nb):
            lo = j * b
            if sides(kinds, params, lo, lo + b, &rp, &rm):
                bad = 1
                break
            rv[j] = (rp if rp > rm else rm) * safety
    if bad:
        raise RadiusError("real-branch inversion did not converge")
    return coeffs, radii


def map_series(const signed char[::1] kinds, const double[:, ::1] params, Py_ssize_t i, Py_ssize_t n):
    """Hat series of map ``i`` alone, through the same path as ``build_blocks``."""
    out = np.zeros(n + 1)
    cdef double[::1] ov = out
    ident = np.zeros(n + 1)
    ident[1] = 1.0
    cdef double[::1] iv = ident
    scratch = np.zeros(6 * (n + 1))
    cdef double[::1] w = scratch
    compose_map(kinds[i], params, i, n, &iv[0], &ov[0], &w[0])
    return out
