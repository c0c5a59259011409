import warnings

from hypothesis import given, strategies as st
import numpy as np
import pytest

from herdlab._validation import make_rng
from herdlab.analytics import exact_discrete_stationary
from herdlab.exceptions import ConfigError, DomainError
from herdlab.langevin import LangevinConfig, _em_chunk, diffusion_coefficient, drift, integrate_langevin
from herdlab.model import ModelParams
from herdlab.signal import constant_signal, synth_signal

P = ModelParams(200, 5e-3, 1e-3, F=0.02)


def test_drift_examples():
    assert drift(0.0, 0.0, P, constant_signal(1.0, 10)) == pytest.approx(0.02)
    for i in (-1.0, 0.0, 0.7):
        assert drift(1.0, 0.0, P, constant_signal(i, 10)) == pytest.approx(-0.01)
    assert drift(0.5, 0.0, P, constant_signal(-1.0, 10)) == pytest.approx(-0.02)


def test_drift_rejects_out_of_range():
    with pytest.raises(DomainError):
        drift(1.01, 0.0, P, constant_signal(0.0, 10))


def test_diffusion_examples():
    assert diffusion_coefficient(1.0, P) == pytest.approx(1e-4)
    assert diffusion_coefficient(-1.0, P) == pytest.approx(1e-4)
    assert diffusion_coefficient(0.0, ModelParams(200, 5e-3, 1e-3)) == pytest.approx(2.1e-3)
    big = ModelParams(10**9, 5e-3, 1e-3)
    assert diffusion_coefficient(0.0, big) == pytest.approx(2e-3, rel=1e-6)


@given(st.floats(-1, 1), st.floats(-1, 1))
def test_drift_odd_under_joint_flip(x, i):
    assert drift(-x, 0.0, P, constant_signal(-i, 10)) == pytest.approx(-drift(x, 0.0, P, constant_signal(i, 10)), abs=1e-15)


@given(st.floats(-1, 1))
def test_diffusion_even_and_minimal_at_consensus(x):
    d = diffusion_coefficient(x, P)
    assert d == diffusion_coefficient(-x, P)
    assert d >= diffusion_coefficient(1.0, P) > 0


def test_config_validation():
    with pytest.raises(ConfigError):
        LangevinConfig(dt=0.0)
    with pytest.raises(ConfigError):
        LangevinConfig(boundary_policy="wrap")
    with pytest.raises(ConfigError):
        LangevinConfig(dt=0.03)
    with pytest.warns(UserWarning):
        LangevinConfig(dt=0.5)


@pytest.mark.parametrize("policy", ["clamp", "reflect"])
def test_path_stays_in_range_and_is_deterministic(policy):
    sig = synth_signal(2, 24)
    cfg = LangevinConfig(boundary_policy=policy, seed=4)
    p = ModelParams(200, 5e-4, 1e-3, F=0.1)
    a = integrate_langevin(p, sig, config=cfg)
    b = integrate_langevin(p, sig, config=cfg)
    assert np.array_equal(a.x, b.x)
    assert np.all(np.abs(a.x) <= 1.0)
    assert a.t.size == 481 and np.array_equal(a.i, sig.daily(480))


def test_fixed_initial_condition():
    d = integrate_langevin(ModelParams(200, 5e-3, 1e-3), constant_signal(0.0, 5), initial=0.3)
    assert d.x[0] == 0.3
    with pytest.raises(ConfigError):
        integrate_langevin(ModelParams(200, 5e-3, 1e-3), constant_signal(0.0, 5), initial=1.5)


def _closed_paths(seeds, days=50_000, dt=0.01):
    p = ModelParams(200, 5e-3, 1e-3)
    return [integrate_langevin(p, constant_signal(0.0, days), config=LangevinConfig(dt, seed=s)).x[1000:]
            for s in seeds]


def test_closed_model_moments():
    xs = np.concatenate(_closed_paths(range(4)))
    assert abs(xs.mean()) < 0.02
    # exact discrete chain as the variance oracle
    q = exact_discrete_stationary(ModelParams(200, 5e-3, 1e-3))
    grid = np.linspace(-1, 1, 201)
    assert xs.var() == pytest.approx(np.dot(q, grid**2), rel=0.1)


def test_closed_model_symmetric_density():
    xs = np.concatenate(_closed_paths(range(4, 8)))
    edges = np.linspace(-1, 1, 21)
    h_pos, _ = np.histogram(xs, edges)
    h_neg, _ = np.histogram(-xs, edges)
    # samples are autocorrelated (~100 days), so compare masses with a loose band
    assert np.abs(h_pos - h_neg).sum() / xs.size < 0.05


def _coupled_variance(seed, days=20_000):
    """Variance at dt and dt/2 driven by the same Brownian path."""
    p = ModelParams(200, 5e-3, 1e-3)
    starts, values = np.array([0.0]), np.array([0.0])
    rng = make_rng(seed)
    fine_z = rng.standard_normal(days * 200)
    coarse_z = (fine_z[0::2] + fine_z[1::2]) / np.sqrt(2.0)
    out = []
    for z, dt, spd in ((coarse_z, 0.01, 100), (fine_z, 0.005, 200)):
        buf = np.empty(days)
        _em_chunk(0.0, 0, 0, starts, values, dt, spd, p.a, p.h0, p.F, float(p.N), False, z, buf, 0)
        out.append(buf[1000:].var())
    return out


def test_halving_dt_changes_variance_little():
    pairs = np.array([_coupled_variance(s) for s in range(3)])
    coarse, fine = pairs.mean(axis=0)
    assert abs(coarse - fine) / fine < 0.02


def test_invalid_params_rejected():
    with pytest.raises(ConfigError):
        integrate_langevin(ModelParams(200, 5e-3, 1e-3, F=0.5), constant_signal(0.0, 5))
