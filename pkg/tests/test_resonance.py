from hypothesis import given, strategies as st
import numpy as np
import pytest

from herdlab.exceptions import ConfigError, DegenerateInputError, DomainError
from herdlab.model import ModelParams
from herdlab.resonance import cross_correlation, default_a_grid, ioc, rms_opinion, sweep
from herdlab.signal import synth_signal


def _square(n, period=40):
    return np.where((np.arange(n) // (period // 2)) % 2 == 0, 1.0, -1.0)


def test_cross_correlation_examples():
    i = np.random.default_rng(0).standard_normal(200)
    assert cross_correlation(i, i, 0) == pytest.approx(1.0)
    assert cross_correlation(i, -i, 0) == pytest.approx(-1.0)
    sq = _square(400)
    shifted = np.concatenate([np.zeros(5), sq[:-5]])
    assert cross_correlation(sq, shifted, 5) == pytest.approx(1.0)


def test_cross_correlation_errors():
    with pytest.raises(DegenerateInputError):
        cross_correlation(np.ones(10), np.arange(10.0), 0)
    with pytest.raises(DomainError):
        cross_correlation(np.arange(10.0), np.arange(10.0), 5)
    with pytest.raises(ConfigError):
        cross_correlation(np.arange(10.0), np.arange(11.0), 0)


def test_ioc_examples():
    i = synth_signal(1, 30).daily(599)
    assert ioc(i, i, 30) == (1.0, 0)
    delayed = np.concatenate([np.full(7, i[0]), i[:-7]])
    c, tau = ioc(i, delayed, 30)
    assert c == pytest.approx(1.0) and tau == 7


def test_ioc_white_noise_null():
    i = synth_signal(7, 264).daily(5279)
    vals = [ioc(i, np.random.default_rng(100 + s).standard_normal(5280), 250)[0] for s in range(20)]
    assert np.mean(np.array(vals) < 0.15) >= 0.95


@given(st.integers(0, 2**32 - 1), st.floats(0.01, 100), st.floats(-10, 10))
def test_ioc_affine_invariant(seed, c, d):
    rng = np.random.default_rng(seed)
    i = np.repeat(rng.uniform(-1, 1, 20), 10)
    x = np.cumsum(rng.standard_normal(200)) * 0.1
    base = ioc(i, x, 50)
    moved = ioc(i, c * x + d, 50)
    assert moved[0] == pytest.approx(base[0], abs=1e-9)
    assert -1 <= base[0] <= 1


def test_rms_examples():
    assert rms_opinion(np.ones(5)) == 1.0
    assert rms_opinion(np.zeros(5)) == 0.0
    assert rms_opinion(np.tile([0.5, -0.5], 10)) == pytest.approx(0.5)


def test_default_grid():
    g = default_a_grid()
    assert g.size == 25 and g[0] == pytest.approx(1e-4) and g[-1] == pytest.approx(1e-1)
    with pytest.raises(ConfigError):
        default_a_grid(1e-2, 1e-3)


def test_sweep_validates_everything_first(monkeypatch):
    import herdlab.resonance as res

    def boom(*args, **kwargs):
        raise AssertionError("simulation started")

    monkeypatch.setattr(res, "run_cell", boom)
    with pytest.raises(ConfigError, match="a=-1"):
        sweep([1e-3, -1.0], [0], ModelParams(200, 1e-3, 1e-3, 0.02), synth_signal(0, 6))


def test_sweep_rows_and_determinism(tmp_path):
    sig = synth_signal(4, 24)
    base = ModelParams(200, 5e-3, 1e-3, 0.02)
    out = []
    for jobs in (1, 3):
        res = sweep([5e-4, 5e-3], [0, 1, 2], base, sig, tau_max=60, n_jobs=jobs)
        path = tmp_path / f"s{jobs}.csv"
        res.to_csv(path)
        out.append(path.read_bytes())
    assert out[0] == out[1]
    assert [(r.a, r.seed) for r in res.rows] == [(a, s) for a in (5e-4, 5e-3) for s in (0, 1, 2)]
    for r in res.rows:
        assert -1 <= r.ioc <= 1 and 0 <= r.rms_x <= 1 and 0 <= r.tau_star <= 60
    aggs = res.aggregates()
    assert len(aggs) == 2 and aggs[0].ioc_std >= 0
    assert res.metadata["N"] == 200 and res.metadata["tau_max"] == 60


def test_single_seed_has_empty_std(tmp_path):
    res = sweep([5e-3], [0], ModelParams(200, 5e-3, 1e-3, 0.02), synth_signal(4, 12), tau_max=30)
    res.aggregates_to_csv(tmp_path / "agg.csv")
    lines = (tmp_path / "agg.csv").read_text().splitlines()
    assert lines[0] == "a,ioc_mean,ioc_std,rms_mean"
    assert lines[1].split(",")[2] == ""


def test_threads_env(monkeypatch):
    from herdlab.resonance import _threads

    monkeypatch.setenv("HERDLAB_THREADS", "2")
    assert _threads() == 2
    monkeypatch.setenv("HERDLAB_THREADS", "zero")
    with pytest.raises(ConfigError):
        _threads()
