"""Piecewise-constant external information signal ``i(t)``.

A new value is released every ``period`` trading days (20 by default:
four weeks of five trading days). Segments are right-open, so a release
applies from its own instant onward.
"""

import csv
from dataclasses import dataclass, field
import logging
import warnings

import numpy as np

from ._validation import check_positive_int, make_rng
from .exceptions import ConfigError, DomainError, IngestionError

logger = logging.getLogger(__name__)

DEFAULT_PERIOD = 20
SCALES = ("auto", "unit", "percent")
KINDS = ("uniform", "random-walk", "square-wave")

# values this close outside [-1, 1] are treated as rounding and clamped
_CLAMP_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class InformationSignal:
    """Release schedule and values of the external signal.

    ``release_times[k] <= t < release_times[k+1]`` maps to ``values[k]``.
    The last segment ends at ``end`` (inclusive), which defaults to
    ``release_times[-1] + period``.
    """

    release_times: np.ndarray
    values: np.ndarray
    period: float = DEFAULT_PERIOD
    end: float = None
    labels: tuple = field(default=None, repr=False)

    def __post_init__(self):
        times = np.asarray(self.release_times, dtype=np.float64).copy()
        values = np.asarray(self.values, dtype=np.float64).copy()
        if times.ndim != 1 or times.shape != values.shape or times.size == 0:
            raise ConfigError("release_times and values must be non-empty 1-D arrays of equal length")
        if times[0] != 0.0:
            raise ConfigError(f"first release must be at t=0, got {times[0]}")
        if np.any(np.diff(times) <= 0):
            raise ConfigError("release_times must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ConfigError("signal values must be finite")
        over = np.abs(values) > 1.0
        if np.any(np.abs(values) > 1.0 + _CLAMP_SLACK):
            k = int(np.argmax(np.abs(values) > 1.0 + _CLAMP_SLACK))
            raise ConfigError(f"signal value {values[k]} at segment {k} outside [-1, 1]")
        if np.any(over):
            warnings.warn(f"clamping {int(over.sum())} signal value(s) to [-1, 1]", stacklevel=3)
            values = np.clip(values, -1.0, 1.0)
        end = self.end
        if end is None:
            if self.period is None:
                raise ConfigError("either period or end must be given")
            end = times[-1] + self.period
        if end <= times[-1]:
            raise ConfigError(f"signal end {end} must exceed the last release {times[-1]}")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "release_times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "end", float(end))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @classmethod
    def from_monthly(cls, values, period=DEFAULT_PERIOD, labels=None):
        """Signal with one value per uniform release interval, starting at 0."""
        values = np.asarray(values, dtype=np.float64)
        times = period * np.arange(values.size, dtype=np.float64)
        return cls(times, values, period=period, labels=labels)

    @property
    def horizon(self):
        return self.end

    @property
    def segment_ends(self):
        return np.append(self.release_times[1:], self.end)

    def segment_index(self, t):
        if not 0.0 <= t <= self.end:
            raise DomainError(f"t={t} outside signal domain [0, {self.end}]")
        return int(np.searchsorted(self.release_times, t, side="right")) - 1

    def value_at(self, t):
        return float(self.values[self.segment_index(t)])

    def daily(self, horizon=None):
        """Signal sampled at integer days ``0..floor(horizon)``."""
        horizon = self.end if horizon is None else horizon
        if horizon > self.end:
            raise DomainError(f"horizon {horizon} beyond signal end {self.end}")
        days = np.arange(int(np.floor(horizon)) + 1, dtype=np.float64)
        idx = np.searchsorted(self.release_times, days, side="right") - 1
        return self.values[idx]

    def __eq__(self, other):
        if not isinstance(other, InformationSignal):
            return NotImplemented
        return (
            np.array_equal(self.release_times, other.release_times)
            and np.array_equal(self.values, other.values)
            and self.end == other.end
        )

    __hash__ = None


def value_at(signal, t):
    """Signal value on the segment containing ``t``."""
    return signal.value_at(t)


def load_signal_csv(path, scale="auto", period=DEFAULT_PERIOD):
    """Read a ``label,value`` CSV into a signal with one segment per row.

    ``scale='percent'`` divides values by 100, ``'unit'`` keeps them, and
    ``'auto'`` picks percent when any ``|value| > 1``.
    """
    if scale not in SCALES:
        raise ConfigError(f"unknown signal scale {scale!r}; expected one of {SCALES}")
    labels, raw = [], []
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise IngestionError(f"cannot open signal file {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise IngestionError(f"{path}: empty file")
        if [h.strip().lower() for h in header] != ["label", "value"]:
            raise IngestionError(f"{path}: expected header 'label,value', got {','.join(header)!r}")
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise IngestionError(f"{path}: row {row_no}: expected 2 columns, got {len(row)}")
            try:
                value = float(row[1])
            except ValueError:
                raise IngestionError(f"{path}: row {row_no}: cannot parse value {row[1]!r}") from None
            if value != value or value in (float("inf"), float("-inf")):
                raise IngestionError(f"{path}: row {row_no}: non-finite value")
            labels.append(row[0])
            raw.append(value)
    if not raw:
        raise IngestionError(f"{path}: no data rows")
    raw = np.asarray(raw)
    if scale == "auto":
        scale = "percent" if np.any(np.abs(raw) > 1.0) else "unit"
        logger.info("signal scale resolved to %s", scale)
    scaled = raw / 100.0 if scale == "percent" else raw
    bad = np.flatnonzero(np.abs(scaled) > 1.0 + _CLAMP_SLACK)
    if bad.size:
        k = int(bad[0])
        raise IngestionError(
            f"{path}: row {k + 1}: scaled value {scaled[k]} outside [-1, 1] (scale={scale})"
        )
    return InformationSignal.from_monthly(scaled, period=period, labels=labels)


def write_signal_csv(signal, path):
    """Write ``label,value`` rows; values use round-trip float formatting."""
    labels = signal.labels or [str(k) for k in range(signal.values.size)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label", "value"])
        for label, v in zip(labels, signal.values):
            writer.writerow([label, repr(float(v))])


def synth_signal(seed, n_months, kind="uniform", period_days=DEFAULT_PERIOD, amplitude=1.0, step=0.2):
    """Deterministic synthetic signal.

    ``uniform`` draws i.i.d. U(-1, 1) monthly values; ``random-walk`` is a
    Gaussian walk with standard deviation ``step`` per month, clamped to
    [-1, 1] at every step; ``square-wave`` alternates ``+amplitude`` and
    ``-amplitude``.
    """
    n_months = check_positive_int(n_months, "n_months")
    if kind not in KINDS:
        raise ConfigError(f"unknown signal kind {kind!r}; expected one of {KINDS}")
    if kind == "square-wave":
        if not 0.0 <= amplitude <= 1.0:
            raise ConfigError(f"amplitude must lie in [0, 1], got {amplitude}")
        values = amplitude * np.where(np.arange(n_months) % 2 == 0, 1.0, -1.0)
    else:
        rng = make_rng(seed)
        if kind == "uniform":
            values = rng.uniform(-1.0, 1.0, size=n_months)
        else:
            steps = rng.normal(0.0, step, size=n_months)
            values = np.empty(n_months)
            level = 0.0
            for k, s in enumerate(steps):
                level = min(1.0, max(-1.0, level + s))
                values[k] = level
    labels = [f"m{k:04d}" for k in range(n_months)]
    return InformationSignal.from_monthly(values, period=period_days, labels=labels)


def constant_signal(value, horizon):
    """Single-segment signal holding ``value`` on ``[0, horizon]``."""
    return InformationSignal(np.array([0.0]), np.array([float(value)]), period=None, end=float(horizon))
