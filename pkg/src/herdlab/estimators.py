"""scikit-learn compatible wrappers.

``HerdingMarket`` treats the information signal as its input: ``fit``
runs one realization of the market driven by it and ``score`` reports
how well the opinion index follows a signal. Because parameters live in
``get_params``/``set_params``, sweeps can be written with ``clone`` or
``ParameterGrid``. ``ReturnsNormalizer`` is a regular transformer that
learns the mean and scale of raw returns.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_series
from .exceptions import ConfigError, DegenerateInputError
from .gillespie import sample_daily, simulate
from .langevin import LangevinConfig, integrate_langevin
from .market import returns
from .model import ModelParams
from .resonance import DEFAULT_TAU_MAX, ioc, rms_opinion
from .signal import InformationSignal

ENGINES = ("gillespie", "langevin")


def as_signal(X, period=20):
    """Accept a signal object or an array of per-release values."""
    if isinstance(X, InformationSignal):
        return X
    return InformationSignal.from_monthly(check_series(X, "signal"), period=period)


class HerdingMarket(BaseEstimator):
    """One realization of the herding market driven by a signal.

    Parameters
    ----------
    N, a, h0, F : model parameters (see :class:`~herdlab.model.ModelParams`).
    horizon : float or None
        Simulated days; defaults to the full signal.
    engine : {'gillespie', 'langevin'}
    initial : 'random' or int
        Initial number of optimists (Gillespie) or ``x0`` (Langevin).
    dt, boundary : Langevin step and boundary policy.
    tau_max : int
        Largest lag searched by ``score``.
    random_state : int
        Seed of the PCG64 stream.

    Attributes
    ----------
    params_ : ModelParams
    signal_ : InformationSignal
    trajectory_ : Trajectory or None
    daily_ : DailySeries
    ioc_, tau_star_, rms_x_ : entrainment statistics of the fitted path
    """

    def __init__(self, N=200, a=5e-3, h0=1e-3, F=0.02, horizon=None, engine="gillespie",
                 initial="random", dt=0.01, boundary="clamp", tau_max=DEFAULT_TAU_MAX,
                 random_state=0):
        self.N = N
        self.a = a
        self.h0 = h0
        self.F = F
        self.horizon = horizon
        self.engine = engine
        self.initial = initial
        self.dt = dt
        self.boundary = boundary
        self.tau_max = tau_max
        self.random_state = random_state

    def fit(self, X, y=None):
        if self.engine not in ENGINES:
            raise ConfigError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        self.params_ = ModelParams(self.N, self.a, self.h0, self.F).check()
        self.signal_ = as_signal(X)
        if self.engine == "gillespie":
            self.trajectory_ = simulate(
                self.params_, self.signal_, self.horizon, self.random_state, self.initial
            )
            self.daily_ = sample_daily(self.trajectory_)
        else:
            cfg = LangevinConfig(self.dt, self.boundary, self.random_state)
            self.trajectory_ = None
            self.daily_ = integrate_langevin(self.params_, self.signal_, self.horizon, cfg, self.initial)
        self.rms_x_ = rms_opinion(self.daily_.x)
        try:
            self.ioc_, self.tau_star_ = ioc(self.daily_.i, self.daily_.x, self.tau_max)
        except DegenerateInputError:
            self.ioc_, self.tau_star_ = float("nan"), -1
        return self

    @property
    def n_events_(self):
        check_is_fitted(self, "daily_")
        return 0 if self.trajectory_ is None else self.trajectory_.n_events

    def score(self, X=None, y=None):
        """IOC between the fitted opinion path and signal ``X`` (default: the fitted one)."""
        check_is_fitted(self, "daily_")
        if X is None:
            return self.ioc_
        i = as_signal(X).daily(self.daily_.t[-1])
        return ioc(i, self.daily_.x, self.tau_max)[0]


class ReturnsNormalizer(TransformerMixin, BaseEstimator):
    """Map a level series (opinion index or log price) to normalized returns.

    ``fit`` stores the mean and population std of the raw ``window``-day
    returns; ``transform`` standardizes the returns of any series with them.
    """

    def __init__(self, window=1):
        self.window = window

    def fit(self, X, y=None):
        R = returns(check_series(X, "X"), self.window)
        sd = R.std()
        if not sd > 0:
            raise DegenerateInputError("returns have zero variance; cannot normalize")
        self.mean_ = float(R.mean())
        self.scale_ = float(sd)
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, ("mean_", "scale_"))
        R = returns(check_series(X, "X"), self.window)
        return (R - self.mean_) / self.scale_

    def inverse_transform(self, r):
        check_is_fitted(self, ("mean_", "scale_"))
        return np.asarray(r, dtype=np.float64) * self.scale_ + self.mean_
