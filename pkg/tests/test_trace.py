import cmath
import math

import numpy as np
import pytest

from fastsle.blocks import build_blocks
from fastsle.driving import increments_from, make_partition, sample_driving
from fastsle.slitmaps import make_tilted, tip
from fastsle.trace import (
    TraceResult, as_indices, compute_trace_baseline, compute_trace_fast, error_between, make_maps,
)


def sample_maps(N, kappa=8 / 3, kind="tilted", seed=0, scheme="uniform"):
    return make_maps(sample_driving(make_partition(N, scheme), kappa, "gaussian", seed), kind)


def test_single_vertical_step():
    s = increments_from([0.5], make_partition(1))
    r = compute_trace_baseline(make_maps(s, "vertical"), [1])
    assert r.points[0] == pytest.approx(0.5 + 2j, abs=1e-15)


def test_single_tilted_step():
    s = increments_from([0.8], make_partition(1))
    pm = make_maps(s, "tilted")
    z = compute_trace_baseline(pm, [1]).points[0]
    assert z == tip(make_tilted(0.8, 1.0))
    assert cmath.phase(z) == pytest.approx(pm[0].alpha * math.pi, abs=1e-10)


def test_two_vertical_steps():
    s = increments_from([0.0, 0.0], make_partition(2))
    z = compute_trace_baseline(make_maps(s, "vertical"), [1, 2]).points
    assert z[0] == pytest.approx(1j * math.sqrt(2), abs=1e-15)
    assert z[1] == pytest.approx(2j, abs=1e-15)


@pytest.mark.parametrize("kind", ["tilted", "vertical"])
def test_infinite_L_reproduces_baseline(kind):
    pm = sample_maps(3000, kind=kind, seed=1)
    idx = np.arange(1, 3001)
    base = compute_trace_baseline(pm, idx)
    fast = compute_trace_fast(pm, build_blocks(pm, 17, 12), idx, math.inf)
    assert fast.points.tobytes() == base.points.tobytes()


def test_points_before_first_block_are_exact():
    pm = sample_maps(500, seed=2)
    b = 20
    idx = np.arange(1, b)
    fast = compute_trace_fast(pm, build_blocks(pm, b, 12), idx, 1.0001)
    assert fast.points.tobytes() == compute_trace_baseline(pm, idx).points.tobytes()


@pytest.mark.parametrize("kappa,tol", [(8 / 3, 1e-6), (6.0, 2e-6)])
def test_fast_agrees_with_baseline(kappa, tol):
    pm = sample_maps(10_000, kappa=kappa, seed=0)
    idx = np.arange(10, 10_001, 10)
    base = compute_trace_baseline(pm, idx)
    fast = compute_trace_fast(pm, build_blocks(pm, 12, 12), idx, 4.0)
    err = error_between(fast, base)
    assert 0 < err <= tol
    assert error_between(fast, base, "max") >= err


@pytest.mark.parametrize("kappa", [8 / 3, 6.0])
@pytest.mark.parametrize("kind", ["tilted", "vertical"])
@pytest.mark.parametrize("scheme", ["uniform", "spaced"])
def test_upper_half_plane(kappa, kind, scheme):
    pm = sample_maps(4000, kappa=kappa, kind=kind, seed=3, scheme=scheme)
    idx = np.arange(1, 4001)
    for r in (compute_trace_baseline(pm, idx), compute_trace_fast(pm, build_blocks(pm, 8, 12), idx, 3.0)):
        assert np.all(r.points.imag >= 0)
        assert np.all(np.isfinite(r.points))


def test_subset_consistency():
    pm = sample_maps(2000, seed=4)
    bs = build_blocks(pm, 6, 12)
    full = compute_trace_fast(pm, bs, np.arange(1, 2001), 3.0)
    part = compute_trace_fast(pm, bs, np.arange(7, 2001, 7), 3.0)
    assert part.points.tobytes() == full.points[6::7].tobytes()
    a = compute_trace_fast(pm, bs, np.arange(1, 1001), 3.0)
    b = compute_trace_fast(pm, bs, np.arange(1001, 2001), 3.0)
    assert np.concatenate([a.points, b.points]).tobytes() == full.points.tobytes()


def test_trailing_maps_are_applied():
    pm = sample_maps(103, seed=5)
    bs = build_blocks(pm, 10, 12)
    assert len(bs) == 10
    fast = compute_trace_fast(pm, bs, [103], 3.0)
    assert abs(fast.points[0] - compute_trace_baseline(pm, [103]).points[0]) < 1e-6


def test_error_between():
    idx = np.arange(1, 6)
    a = TraceResult(idx, np.linspace(0, 1, 5) + 1j)
    b = TraceResult(idx, a.points + (3 + 4j))
    assert error_between(a, a) == 0.0
    assert error_between(a, b) == pytest.approx(5.0, rel=1e-15)
    assert error_between(a, b, "max") == pytest.approx(5.0, rel=1e-15)
    with pytest.raises(ValueError):
        error_between(a, TraceResult(idx[:4], a.points[:4]))
    with pytest.raises(ValueError):
        error_between(a, b, "median")
    with pytest.raises(ValueError):
        error_between(TraceResult(idx[:0], a.points[:0]), TraceResult(idx[:0], a.points[:0]))


def test_index_validation():
    assert as_indices([1, 2, 5], 5).dtype == np.int64
    for bad in ([0, 1], [2, 2], [3, 1], [6]):
        with pytest.raises(ValueError):
            as_indices(bad, 5)
    with pytest.raises(ValueError):
        as_indices([[1]], 5)


def test_fast_rejects_mismatched_inputs():
    pm = sample_maps(100)
    bs = build_blocks(pm, 10, 6)
    with pytest.raises(ValueError):
        compute_trace_fast(pm, bs, [5], 1.0)
    with pytest.raises(ValueError):
        compute_trace_fast(sample_maps(50), bs, [5], 2.0)


def test_config_echo():
    pm = sample_maps(100)
    r = compute_trace_fast(pm, build_blocks(pm, 10, 6), [5, 50], 2.0, {"seed": 0})
    assert r.config == {"seed": 0, "algorithm": "fast", "b": 10, "n": 6, "L": 2.0}
    assert compute_trace_baseline(pm, [1]).config["algorithm"] == "baseline"
