"""Herding market model driven by an external information signal."""

from .analytics import (
    StationaryDensity, classify_regime, effective_potential, incomplete_beta,
    stationary_density, stationary_pdf,
)
from .estimators import HerdingMarket, ReturnsNormalizer
from .exceptions import (
    ConfigError, DegenerateInputError, DomainError, HerdlabError, IngestionError, InvariantError,
)
from .gillespie import DailySeries, SystemState, Trajectory, next_event, sample_daily, simulate
from .langevin import LangevinConfig, diffusion_coefficient, drift, integrate_langevin
from .market import (
    MarketConfig, ReturnSeries, abs_return_histogram, acf, equilibrium_price, excess_demand,
    load_price_csv, normalize_returns, returns,
)
from .model import (
    ModelParams, herding_coefficients, opinion_index, rates_closed, rates_open, validate_params,
)
from .resonance import SweepResult, cross_correlation, ioc, rms_opinion, sweep
from .signal import InformationSignal, load_signal_csv, synth_signal, value_at

__version__ = "0.1.0"
