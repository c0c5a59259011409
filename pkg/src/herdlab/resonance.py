"""Entrainment of the market by the signal and sweeps over the switching rate."""

import csv
from dataclasses import dataclass, field
import os

from joblib import Parallel, delayed
import numpy as np

from ._validation import check_lag, check_series
from .exceptions import ConfigError, DegenerateInputError
from .model import ModelParams, validate_params

DEFAULT_TAU_MAX = 250


def _pearson(u, w):
    du = u - u.mean()
    dw = w - w.mean()
    su = np.sqrt(np.mean(du * du))
    sw = np.sqrt(np.mean(dw * dw))
    if su == 0.0 or sw == 0.0:
        raise DegenerateInputError("zero variance in an overlapping window")
    return float(np.clip(np.mean(du * dw) / (su * sw), -1.0, 1.0))


def cross_correlation(i_series, x_series, tau):
    """Correlation of ``i(t)`` with ``x(t + tau)`` over the overlapping days.

    Means and standard deviations are taken over the overlap itself, so a
    series shifted by exactly ``tau`` scores 1.
    """
    i = check_series(i_series, "i_series", min_length=2)
    x = check_series(x_series, "x_series", min_length=2)
    if i.size != x.size:
        raise ConfigError(f"series lengths differ: {i.size} != {x.size}")
    if np.ptp(i) == 0.0 or np.ptp(x) == 0.0:
        raise DegenerateInputError("correlation undefined for a constant series")
    tau = check_lag(tau, i.size, "tau")
    return _pearson(i[: i.size - tau], x[tau:])


def ioc(i_series, x_series, tau_max=DEFAULT_TAU_MAX):
    """Input-output correlation: ``(max_tau corr, argmax)`` over ``0..tau_max``.

    Ties resolve to the smallest lag.
    """
    i = check_series(i_series, "i_series", min_length=2)
    x = check_series(x_series, "x_series", min_length=2)
    if i.size != x.size:
        raise ConfigError(f"series lengths differ: {i.size} != {x.size}")
    if np.ptp(i) == 0.0 or np.ptp(x) == 0.0:
        raise DegenerateInputError("correlation undefined for a constant series")
    check_lag(tau_max, i.size, "tau_max")
    best, best_tau = -np.inf, 0
    n = i.size
    for tau in range(tau_max + 1):
        try:
            c = _pearson(i[: n - tau], x[tau:])
        except DegenerateInputError:
            continue
        if c > best:
            best, best_tau = c, tau
    if best == -np.inf:
        raise DegenerateInputError("no lag with non-degenerate overlap")
    return best, best_tau


def rms_opinion(x_series):
    """``sqrt(<x^2>)``: 1 at permanent consensus, 0 at a permanent even split."""
    x = check_series(x_series, "x_series")
    return float(np.sqrt(np.mean(x * x)))


@dataclass(frozen=True)
class SweepRow:
    a: float
    seed: int
    ioc: float
    tau_star: int
    rms_x: float


@dataclass(frozen=True)
class SweepAggregate:
    a: float
    ioc_mean: float
    ioc_std: float
    rms_mean: float


@dataclass(frozen=True, eq=False)
class SweepResult:
    rows: tuple
    metadata: dict = field(default_factory=dict)

    @property
    def a_values(self):
        seen = []
        for row in self.rows:
            if row.a not in seen:
                seen.append(row.a)
        return seen

    def aggregates(self):
        """Per-``a`` mean and sample std (ddof=1; NaN for a single seed)."""
        out = []
        for a in self.a_values:
            iocs = np.array([r.ioc for r in self.rows if r.a == a])
            rms = np.array([r.rms_x for r in self.rows if r.a == a])
            std = float(np.std(iocs, ddof=1)) if iocs.size > 1 else float("nan")
            out.append(SweepAggregate(a, float(iocs.mean()), std, float(rms.mean())))
        return out

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["a", "seed", "ioc", "tau_star", "rms_x"])
            for r in self.rows:
                w.writerow([repr(r.a), r.seed, repr(r.ioc), r.tau_star, repr(r.rms_x)])

    def aggregates_to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["a", "ioc_mean", "ioc_std", "rms_mean"])
            for g in self.aggregates():
                std = "" if g.ioc_std != g.ioc_std else repr(g.ioc_std)
                w.writerow([repr(g.a), repr(g.ioc_mean), std, repr(g.rms_mean)])


def default_a_grid(a_min=1e-4, a_max=1e-1, points=25):
    if not 0 < a_min < a_max or points < 2:
        raise ConfigError("a-grid needs 0 < a_min < a_max and at least two points")
    return np.geomspace(a_min, a_max, points)


def _threads():
    raw = os.environ.get("HERDLAB_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"HERDLAB_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("HERDLAB_THREADS must be >= 1")
    return n


def run_cell(params, signal, seed, tau_max, horizon=None, engine="gillespie", dt=0.01):
    """Simulate one ``(a, seed)`` cell and return its :class:`SweepRow`."""
    # local import keeps the estimator module out of the import cycle
    from .estimators import HerdingMarket

    est = HerdingMarket(
        N=params.N, a=params.a, h0=params.h0, F=params.F, horizon=horizon,
        engine=engine, dt=dt, tau_max=tau_max, random_state=seed,
    ).fit(signal)
    return SweepRow(float(params.a), int(seed), est.ioc_, int(est.tau_star_), est.rms_x_)


def sweep(a_grid, seeds, base_params, signal, tau_max=DEFAULT_TAU_MAX, horizon=None,
          engine="gillespie", dt=0.01, n_jobs=None):
    """IOC and RMS opinion for every ``(a, seed)`` pair.

    All parameter combinations are validated before anything runs. Rows
    come back ordered by ``(a index, seed index)`` whatever the thread
    count (``HERDLAB_THREADS`` when ``n_jobs`` is None).
    """
    a_grid = [float(a) for a in a_grid]
    seeds = [int(s) for s in seeds]
    if not a_grid or not seeds:
        raise ConfigError("sweep needs at least one a value and one seed")
    cells = []
    problems = []
    for a in a_grid:
        p = ModelParams(base_params.N, a, base_params.h0, base_params.F)
        problems += [f"a={a}: {msg}" for msg in validate_params(p)]
        cells.append(p)
    if problems:
        raise ConfigError("invalid sweep: " + "; ".join(problems))
    horizon = signal.end if horizon is None else float(horizon)
    if horizon > signal.end:
        raise ConfigError(f"horizon {horizon} exceeds the signal domain [0, {signal.end}]")
    n_jobs = _threads() if n_jobs is None else n_jobs
    jobs = [(p, s) for p in cells for s in seeds]
    # compiled kernels release the GIL, so threads scale
    rows = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(run_cell)(p, signal, s, tau_max, horizon, engine, dt) for p, s in jobs
    )
    metadata = {
        "h0": base_params.h0, "F": base_params.F, "N": base_params.N,
        "horizon": horizon, "tau_max": tau_max, "engine": engine,
        "signal_segments": int(signal.values.size),
    }
    return SweepResult(rows=tuple(rows), metadata=metadata)
