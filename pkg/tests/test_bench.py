import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fastsle.bench import (
    SweepRow, TraceConfig, default_b, default_d, default_L, loglog_slope, run_trace, sweep,
    time_per_point,
)


def test_default_rules():
    assert default_b(10_000) == 12
    assert default_b(10_000, 6.0) == 10
    assert default_b(10_000, 4.0) == 12
    assert default_b(100_000) == 38
    assert default_b(3) == 1
    assert default_L(12) == pytest.approx(10 ** 0.5, rel=1e-15)
    assert default_L(6, 1e-6) == pytest.approx(10.0, rel=1e-15)
    assert default_d(300_000) == 300
    assert default_d(10) == 1
    with pytest.raises(ValueError):
        default_L(0)
    with pytest.raises(ValueError):
        default_L(4, 2.0)


@given(st.integers(1, 10**8), st.sampled_from([8 / 3, 6.0, 2.0]))
def test_default_b_near_sqrt(N, kappa):
    coef = 0.1 if kappa == 6.0 else 0.12
    assert abs(default_b(N, kappa) - max(1, coef * math.sqrt(N))) <= 0.5 + 1e-9


@given(st.integers(1, 40), st.floats(1e-12, 0.5))
def test_default_L_hits_target(n, eps):
    assert default_L(n, eps) ** -n == pytest.approx(eps, rel=1e-10)


def test_loglog_slope_exact_power_law():
    rows = [{"x": x, "y": 7 * x ** 0.4} for x in (1.0, 3.0, 10.0, 30.0, 1e3)]
    assert loglog_slope(rows, "x", "y") == pytest.approx(0.4, abs=1e-12)


def test_loglog_slope_rejects():
    with pytest.raises(ValueError):
        loglog_slope([{"x": 1, "y": 1}, {"x": 2, "y": 2}], "x", "y")
    with pytest.raises(ValueError):
        loglog_slope([{"x": 1, "y": 1}, {"x": 2, "y": 0}, {"x": 3, "y": 3}], "x", "y")
    with pytest.raises(ValueError):
        loglog_slope([{"x": -1, "y": 1}, {"x": 2, "y": 2}, {"x": 3, "y": 3}], "x", "y")


def test_config_validation():
    for kw in ({"N": 0}, {"kappa": 0}, {"d": 11, "N": 10}, {"b": 0}, {"n": 0}, {"L": 1.0},
               {"algorithm": "slow"}, {"discretization": "oblique"}):
        with pytest.raises(ValueError):
            TraceConfig(**kw)
    c = TraceConfig(N=10_000).resolved()
    assert (c.b, c.d, c.L) == (12, 10, pytest.approx(10 ** 0.5))
    assert TraceConfig(N=400, kappa=6.0).resolved().b == 2
    assert c.as_dict()["discretization"] == "tilted"


def test_time_per_point_single_point():
    t = time_per_point(TraceConfig(N=50, d=50), repetitions=3)
    assert math.isfinite(t) and t > 0
    t = time_per_point(TraceConfig(N=1, d=1, algorithm="baseline"), repetitions=1)
    assert math.isfinite(t) and t > 0
    with pytest.raises(ValueError):
        time_per_point(TraceConfig(N=5), repetitions=0)


def test_run_trace_echo():
    r = run_trace(TraceConfig(N=1000, seed=3))
    assert len(r) == 1000
    assert r.config["seed"] == 3 and r.config["b"] == default_b(1000)
    assert r.config["algorithm"] == "fast"


def test_sweep_rows_and_determinism():
    base = TraceConfig(N=5000, seed=7)
    a = sweep("n", [4, 6, 8, 10], base, repetitions=1)
    b = sweep("n", [4, 6, 8, 10], base, repetitions=1)
    assert [r.error for r in a] == [r.error for r in b]
    assert all(isinstance(r, SweepRow) and r.time_per_point > 0 and r.samples == 1 for r in a)
    # an n sweep with L unset keeps L**-n at the default target
    assert all(r.L ** -r.n == pytest.approx(1e-6, rel=1e-9) for r in a)
    errs = [r.error for r in sweep("n", [4, 6, 8, 10], TraceConfig(N=5000, seed=7, L=4.0), repetitions=1)]
    assert all(e2 < e1 for e1, e2 in zip(errs, errs[1:]))
    rows = sweep("N", [1000, 2000, 4000], base, repetitions=1, with_error=False)
    assert [r.b for r in rows] == [default_b(N) for N in (1000, 2000, 4000)]
    assert all(r.error is None for r in rows)
    rows = sweep("L", [2, 4], TraceConfig(N=2000, algorithm="baseline"), repetitions=1)
    assert [r.error for r in rows] == [0.0, 0.0]


def test_sweep_rejects():
    with pytest.raises(ValueError):
        sweep("n", [], TraceConfig(N=100))
    with pytest.raises(ValueError):
        sweep("kappa", [2.0], TraceConfig(N=100))
    with pytest.raises(ValueError):
        sweep("b", [0], TraceConfig(N=100))


def _ratio(cfg, reps=11, tries=3):
    # minimum of medians keeps scheduler noise out of a ratio of small times
    base = TraceConfig(N=cfg.N, d=cfg.d, algorithm="baseline", seed=cfg.seed)
    f = min(time_per_point(cfg, reps) for _ in range(tries))
    s = min(time_per_point(base, reps) for _ in range(tries))
    return f / s


@pytest.mark.parametrize("N", [100, 300, 1000])
@pytest.mark.parametrize("b,L", [(None, None), (1, None), (None, 100.0), (1, 100.0), (3, 1.01)])
def test_fast_never_much_slower(N, b, L):
    assert _ratio(TraceConfig(N=N, d=1, b=b, L=L)) <= 1.1


@pytest.fixture(scope="module")
def order_times():
    rows = sweep("n", [8, 10, 12, 14], TraceConfig(N=300_000), repetitions=5, with_error=False)
    return {r.n: r.time_per_point for r in rows}


def test_higher_orders_beat_n8_at_large_N(order_times):
    t = order_times
    assert max(t[12], t[14]) <= 1.2 * min(t[12], t[14])
    assert t[8] > 1.2 * max(t[10], t[12], t[14])


@pytest.mark.xfail(reason="n=10 runs 1.23-1.29x slower than n=14 here; cheap series "
                          "evaluation favours the smaller L of larger n", strict=False)
def test_n10_within_20_percent_of_best(order_times):
    t = order_times
    assert t[10] <= 1.2 * min(t[12], t[14])
