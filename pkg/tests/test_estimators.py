import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.model_selection import ParameterGrid

from herdlab.estimators import HerdingMarket, ReturnsNormalizer
from herdlab.exceptions import ConfigError, DegenerateInputError
from herdlab.market import normalize_returns, returns
from herdlab.resonance import ioc
from herdlab.signal import synth_signal


def test_params_roundtrip_and_clone():
    est = HerdingMarket(a=1e-3, random_state=4)
    params = est.get_params()
    assert params["a"] == 1e-3 and params["random_state"] == 4
    c = clone(est)
    assert c.get_params() == params and c is not est
    assert len(list(ParameterGrid({"a": [1e-3, 5e-3], "random_state": [0, 1]}))) == 4


def test_fit_gillespie():
    sig = synth_signal(3, 24)
    est = HerdingMarket(random_state=2, tau_max=100).fit(sig)
    assert est.daily_.x.size == 481 and est.n_events_ > 0
    assert est.ioc_ == pytest.approx(ioc(est.daily_.i, est.daily_.x, 100)[0])
    assert est.score() == est.ioc_
    assert est.score(sig) == pytest.approx(est.ioc_)
    again = HerdingMarket(random_state=2, tau_max=100).fit(sig)
    assert np.array_equal(again.daily_.x, est.daily_.x)


def test_fit_accepts_monthly_values():
    est = HerdingMarket(tau_max=40).fit(np.linspace(-1, 1, 12))
    assert est.signal_.horizon == 240


def test_fit_langevin():
    est = HerdingMarket(engine="langevin", random_state=1, tau_max=60).fit(synth_signal(3, 12))
    assert est.trajectory_ is None and est.n_events_ == 0
    assert np.all(np.abs(est.daily_.x) <= 1)


def test_bad_engine_and_params():
    with pytest.raises(ConfigError):
        HerdingMarket(engine="euler").fit(synth_signal(0, 3))
    with pytest.raises(ConfigError):
        HerdingMarket(F=0.5).fit(synth_signal(0, 3))


def test_unfitted():
    with pytest.raises(NotFittedError):
        HerdingMarket().score()


def test_returns_normalizer_matches_function():
    x = HerdingMarket(random_state=5, tau_max=50).fit(synth_signal(1, 12)).daily_.x
    tr = ReturnsNormalizer()
    r = tr.fit_transform(x)
    assert np.allclose(r, normalize_returns(returns(x)).r)
    assert np.allclose(tr.inverse_transform(r), returns(x))
    assert clone(ReturnsNormalizer(window=3)).window == 3
    with pytest.raises(DegenerateInputError):
        ReturnsNormalizer().fit(np.ones(10))
    with pytest.raises(NotFittedError):
        ReturnsNormalizer().transform(x)
