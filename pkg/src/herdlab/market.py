"""Prices, returns, volatility and their statistics.

Fundamentalists trade toward a constant fundamental price ``p_f`` and
noise traders buy or sell according to the opinion index. With instant
market clearing and equal traded volumes the price is ``p_f exp(x)``, so
log returns are plain differences of ``x``.
"""

import csv
from dataclasses import dataclass
import math

import numpy as np

from ._validation import check_lag, check_nonconstant, check_series
from .exceptions import ConfigError, DegenerateInputError, DomainError, IngestionError


@dataclass(frozen=True)
class MarketConfig:
    p_f: float = 100.0
    N_f: float = 1.0
    T_f: float = 1.0
    T_c: float = None
    N: int = 1

    def __post_init__(self):
        if not self.p_f > 0:
            raise ConfigError(f"fundamental price must be positive, got {self.p_f}")
        if self.T_c is None:
            object.__setattr__(self, "T_c", self.N_f * self.T_f / self.N)
        for name in ("N_f", "T_f", "T_c", "N"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        lhs, rhs = self.N_f * self.T_f, self.N * self.T_c
        if abs(lhs - rhs) > 1e-12 * max(abs(lhs), abs(rhs)):
            raise ConfigError(f"equal traded volumes required: N_f*T_f={lhs} != N*T_c={rhs}")


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    R: np.ndarray
    r: np.ndarray
    v: np.ndarray

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "R", "r", "v"])
            for k, (R, r, v) in enumerate(zip(self.R.tolist(), self.r.tolist(), self.v.tolist())):
                w.writerow([k, repr(R), repr(r), repr(v)])


@dataclass(frozen=True, eq=False)
class Histogram:
    bin_lo: np.ndarray
    bin_hi: np.ndarray
    mass: np.ndarray

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["bin_lo", "bin_hi", "mass"])
            for row in zip(self.bin_lo.tolist(), self.bin_hi.tolist(), self.mass.tolist()):
                w.writerow([repr(v) for v in row])


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """External daily closes; ``x`` holds log prices so it feeds :func:`returns`."""

    labels: tuple
    close: np.ndarray

    @property
    def x(self):
        return np.log(self.close)

    def __len__(self):
        return int(self.close.size)


def equilibrium_price(x, config):
    """Market-clearing price ``p_f exp(x)``."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("opinion index must lie in [-1, 1]")
    out = config.p_f * np.exp(x)
    return out if out.ndim else float(out)


def excess_demand(p, x, config):
    """``(ED_f, ED_c)`` of fundamentalists and noise traders at price ``p``."""
    if not p > 0:
        raise DomainError(f"price must be positive, got {p}")
    ed_f = config.N_f * config.T_f * math.log(config.p_f / p)
    ed_c = config.N * config.T_c * x
    return ed_f, ed_c


def returns(series, window=1):
    """Raw returns ``x(t + window) - x(t)``.

    ``series`` is an opinion-index path, a :class:`PriceSeries` (log
    prices) or any 1-D array.
    """
    x = check_series(series, "series")
    if isinstance(window, bool) or not isinstance(window, (int, np.integer)) or window < 1:
        raise DomainError(f"window must be a positive integer, got {window!r}")
    if window >= x.size:
        raise DomainError(f"window={window} must be shorter than the series (length {x.size})")
    return x[window:] - x[:-window]


def normalize_returns(R):
    """Standardize returns (population std) and take absolute values as volatility."""
    R = check_series(R, "returns")
    sd = R.std()
    if not sd > 0:
        raise DegenerateInputError("returns have zero variance; cannot normalize")
    r = (R - R.mean()) / sd
    return ReturnSeries(R=R, r=r, v=np.abs(r))


def acf(series, max_lag=1000):
    """Autocorrelation at lags ``0..max_lag``.

    Uses the full-series mean and (biased) variance; lag products are
    averaged over the ``n - lag`` overlapping terms.
    """
    v = check_series(series, "series", min_length=2)
    check_lag(max_lag, v.size, "max_lag")
    check_nonconstant(v, "series")
    d = v - v.mean()
    var = np.mean(d * d)
    n = v.size
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for lag in range(1, max_lag + 1):
        out[lag] = np.dot(d[: n - lag], d[lag:]) / (n - lag) / var
    return out


def abs_return_histogram(r, bins=50, log_scale=False):
    """Normalized histogram of ``|r|``; masses sum to one.

    With ``log_scale`` the edges are geometric between the smallest
    positive and the largest ``|r|``; zeros fall in the first bin.
    """
    a = np.abs(check_series(r, "returns"))
    if isinstance(bins, bool) or not isinstance(bins, (int, np.integer)) or bins < 2:
        raise DomainError(f"bins must be an integer >= 2, got {bins!r}")
    lo, hi = float(a.min()), float(a.max())
    if lo == hi:
        edges = np.linspace(lo, lo + 1.0, bins + 1) if lo == 0 else np.linspace(lo * 0.5, lo * 1.5, bins + 1)
    elif log_scale:
        pos = a[a > 0]
        lo_pos = float(pos.min())
        if lo_pos == hi:
            edges = np.linspace(0.0, hi, bins + 1)
        else:
            edges = np.geomspace(lo_pos, hi, bins + 1)
    else:
        edges = np.linspace(lo, hi, bins + 1)
    clipped = np.clip(a, edges[0], edges[-1])
    idx = np.clip(np.searchsorted(edges, clipped, side="right") - 1, 0, bins - 1)
    mass = np.bincount(idx, minlength=bins) / a.size
    return Histogram(bin_lo=edges[:-1].copy(), bin_hi=edges[1:].copy(), mass=mass)


def load_price_csv(path):
    """Read ``label,close`` rows; closes must be positive."""
    labels, close = [], []
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise IngestionError(f"cannot open price file {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["label", "close"]:
            raise IngestionError(f"{path}: expected header 'label,close'")
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise IngestionError(f"{path}: row {row_no}: expected 2 columns, got {len(row)}")
            try:
                price = float(row[1])
            except ValueError:
                raise IngestionError(f"{path}: row {row_no}: cannot parse close {row[1]!r}") from None
            if not (price > 0 and math.isfinite(price)):
                raise IngestionError(f"{path}: row {row_no}: close must be positive and finite, got {row[1]}")
            labels.append(row[0])
            close.append(price)
    if not close:
        raise IngestionError(f"{path}: no data rows")
    return PriceSeries(labels=tuple(labels), close=np.asarray(close))


def write_price_csv(prices, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "close"])
        for label, c in zip(prices.labels, prices.close.tolist()):
            w.writerow([label, repr(c)])


def write_acf_csv(values, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lag", "acf"])
        for lag, c in enumerate(np.asarray(values).tolist()):
            w.writerow([lag, repr(c)])


def top_share(R, fraction=0.01):
    """Share of total ``|R|`` carried by the largest ``fraction`` of days."""
    a = np.sort(np.abs(check_series(R, "returns")))[::-1]
    total = a.sum()
    if total == 0:
        raise DegenerateInputError("all returns are zero")
    k = max(1, int(math.ceil(fraction * a.size)))
    return float(a[:k].sum() / total)
