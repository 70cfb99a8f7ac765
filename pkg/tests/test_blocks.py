import cmath
import math

import numpy as np
import pytest

from fastsle.blocks import (
    RADIUS_SAFETY, RadiusError, build_blocks, compute_radius, eval_block, radius_sides,
    realness_predicate,
)
from fastsle.driving import make_partition, sample_driving
from fastsle.hatseries import compose, eval_hat, hat_of_map
from fastsle.slitmaps import Kind, eval_map, make_tilted, make_vertical
from fastsle.trace import make_maps

R8 = math.sqrt(8 / 3)


def maps_for(N, kappa=8 / 3, kind="tilted", seed=0):
    return make_maps(sample_driving(make_partition(N), kappa, "gaussian", seed), kind)


def direct(maps, z):
    for m in reversed(list(maps)):
        z = eval_map(m, z)
    return z


def test_block_layout():
    pm = maps_for(10)
    bs = build_blocks(pm, 3, 6)
    assert len(bs) == 3
    assert [(b.first, b.last, b.count) for b in bs] == [(0, 2, 3), (3, 5, 3), (6, 8, 3)]
    assert bs[-1].first == 6
    assert len(bs[0:2]) == 2
    with pytest.raises(IndexError):
        bs[3]


@pytest.mark.parametrize("N,b", [(100, 7), (1000, 12), (37, 37), (5, 1)])
def test_block_count(N, b):
    bs = build_blocks(maps_for(N), b, 4)
    assert len(bs) == N // b
    assert all(blk.count == b for blk in bs)


@pytest.mark.parametrize("kind", list(Kind))
def test_single_map_blocks(kind):
    pm = maps_for(40, kind=kind, seed=4)
    bs = build_blocks(pm, 1, 10)
    for j, blk in enumerate(bs):
        m = pm[j]
        assert np.allclose(blk.series.coeffs, hat_of_map(m, 10).coeffs, rtol=1e-13, atol=1e-15)
        if kind is Kind.TILTED:
            assert blk.radius == pytest.approx(m.cut_radius * RADIUS_SAFETY, rel=1e-15)
        else:
            # the real zero of the vertical map lies outside its cut when delta != 0
            assert blk.radius == pytest.approx(math.hypot(m.delta, m.xr) * RADIUS_SAFETY, rel=1e-14)


def test_block_series_is_composition():
    pm = maps_for(30, seed=2)
    bs = build_blocks(pm, 5, 12)
    for blk in bs:
        S = hat_of_map(pm[blk.last], 12)
        for i in range(blk.last - 1, blk.first - 1, -1):
            S = compose(hat_of_map(pm[i], 12), S)
        assert np.allclose(blk.series.coeffs, S.coeffs, rtol=1e-11, atol=1e-13)
        assert blk.series.coeffs[0] == 0 and blk.series.coeffs[1] == 1


def test_whole_sequence_block():
    pm = maps_for(60, seed=1)
    blk = build_blocks(pm, 60, 12)[0]
    L = 4.0
    for th in np.linspace(0, math.pi, 7):
        z = L * blk.radius * cmath.exp(1j * th)
        ref = direct(pm, z)
        assert abs(eval_block(blk, pm, z, L) - ref) <= 1e-6 * abs(z)


def test_radius_examples():
    assert compute_radius([make_vertical(0.0, 0.25)]) == pytest.approx(1.0, rel=1e-8)
    m = make_tilted(R8, 1.0)
    assert compute_radius([m]) == pytest.approx(m.xl, rel=1e-8)
    assert compute_radius([m]) == pytest.approx(2.9767, abs=1e-4)
    for method in ("invert", "bisect"):
        assert compute_radius([m], method) == pytest.approx(m.xl * RADIUS_SAFETY, rel=1e-11)


@pytest.mark.parametrize("kind", list(Kind))
def test_inversion_matches_bisection(kind, rng):
    for _ in range(60):
        b = int(rng.integers(1, 33))
        pm = maps_for(b, kappa=float(rng.uniform(0.5, 8)), kind=kind, seed=int(rng.integers(1 << 32)))
        ms = list(pm)
        assert compute_radius(ms, "invert") == pytest.approx(compute_radius(ms, "bisect"), rel=1e-10)


@pytest.mark.parametrize("kind", list(Kind))
def test_realness_at_radius(kind, rng):
    for _ in range(100):
        b = int(rng.integers(1, 33))
        pm = maps_for(b, kappa=float(rng.choice([8 / 3, 6.0])), kind=kind, seed=int(rng.integers(1 << 32)))
        R = compute_radius(pm)
        for s in (1, -1):
            assert abs(direct(pm, complex(s * R * (1 + 1e-6), 0.0)).imag) <= 1e-9 * R
            for f in (1 + 1e-6, 1.5, 4.0, 100.0):
                assert realness_predicate(pm, s * R * f)
        assert not (realness_predicate(pm, R * (1 - 1e-6)) and realness_predicate(pm, -R * (1 - 1e-6)))


def test_radius_covers_innermost_cut(rng):
    pm = maps_for(4000, kappa=6.0, seed=9)
    for b in (2, 8, 32):
        bs = build_blocks(pm, b, 4)
        for blk in bs:
            assert blk.radius >= pm[blk.last].cut_radius


def test_radius_can_be_below_an_outer_cut():
    # the inner map pushes the real axis away from the outer cut, so R_j
    # need not dominate every constituent cut radius
    ms = [make_tilted(0.061167877678925904, 0.00025), make_tilted(-0.029559191488807954, 0.00025)]
    R = compute_radius(ms)
    assert R < 0.8 * ms[0].cut_radius
    assert abs(direct(ms, complex(R * (1 + 1e-6), 0)).imag) <= 1e-9 * R
    assert abs(direct(ms, complex(-R * (1 + 1e-6), 0)).imag) <= 1e-9 * R
    assert compute_radius(ms, "bisect") == pytest.approx(R, rel=1e-10)


def test_radius_sides_tilted_two_maps():
    # oracle: pull xr of the outer map back through the inner map by root finding
    inner, outer = make_tilted(-0.3, 0.2), make_tilted(0.4, 0.1)
    rp, rm = radius_sides([outer, inner])
    from fastsle.slitmaps import eval_real_outside_cut as real

    lo, hi = inner.xr, 100.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if real(inner, mid) < outer.xr else (lo, mid)
    assert rp == pytest.approx(hi, rel=1e-12)
    assert real(inner, -rm) == pytest.approx(-outer.xl, rel=1e-10)


def test_eval_block_paths():
    pm = maps_for(24, seed=3)
    blk = build_blocks(pm, 12, 12)[0]
    L = 4.0
    z = 0.5 * L * blk.radius * 1j
    ref = z
    for i in range(blk.last, blk.first - 1, -1):
        ref = eval_map(pm[i], ref)
    assert eval_block(blk, pm, z, L) == ref
    for th in np.linspace(0, math.pi, 5):
        z = 10 * L * blk.radius * cmath.exp(1j * th)
        assert abs(eval_block(blk, pm, z, L) - direct(pm[:12], z)) <= 1e-6 * abs(z)
    with pytest.raises(ValueError):
        eval_block(blk, pm, z, 1.0)


def test_eval_block_single_map_far():
    pm = maps_for(3, seed=5)
    blk = build_blocks(pm, 1, 12)[1]
    z = 1e6 * cmath.exp(0.3j)
    assert eval_block(blk, pm, z, 2.0) == pytest.approx(eval_map(pm[1], z), rel=1e-10)


def test_fast_path_envelope():
    # every series evaluation along a trace stays close to the direct composition
    N, b, n, L = 10_000, 12, 12, 4.0
    pm = maps_for(N, seed=0)
    bs = build_blocks(pm, b, n)
    ms = list(pm)
    worst = 0.0
    for k in range(b + 7, N + 1, 97):
        m = k // b
        z = 0j
        for i in range(k - 1, m * b - 1, -1):
            z = eval_map(ms[i], z)
        for j in range(m - 1, -1, -1):
            blk = bs[j]
            ref = z
            for i in range(blk.last, blk.first - 1, -1):
                ref = eval_map(ms[i], ref)
            if abs(z) >= L * blk.radius:
                w = eval_hat(blk.series, z)
                worst = max(worst, abs(w - ref))
            z = ref
    assert 0 < worst <= 1e-5


def test_build_rejects():
    pm = maps_for(10)
    for b, n in ((0, 4), (3, 0)):
        with pytest.raises(ValueError):
            build_blocks(pm, b, n)
    with pytest.raises(ValueError):
        build_blocks([], 1, 4)
    with pytest.raises(ValueError):
        compute_radius([])
    with pytest.raises(ValueError):
        compute_radius(list(pm), "guess")
    assert issubclass(RadiusError, ArithmeticError)
