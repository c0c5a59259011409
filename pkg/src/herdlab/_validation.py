"""Input validation helpers shared by the public functions and estimators."""

import numbers

import numpy as np

from .exceptions import ConfigError, DegenerateInputError, DomainError


def check_series(x, name="series", min_length=1):
    """Return ``x`` as a finite 1-D float64 array.

    Accepts lists, arrays and objects exposing an ``x`` attribute
    (e.g. :class:`~herdlab.gillespie.DailySeries`).
    """
    if hasattr(x, "x") and not isinstance(x, np.ndarray):
        x = x.x
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise DomainError(f"{name} needs at least {min_length} values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains non-finite values")
    return arr


def check_nonconstant(x, name="series"):
    if np.ptp(x) == 0.0:
        raise DegenerateInputError(f"{name} has zero variance")
    return x


def check_lag(lag, length, name="lag"):
    if not isinstance(lag, numbers.Integral) or isinstance(lag, bool):
        raise DomainError(f"{name} must be an integer, got {lag!r}")
    if lag < 0 or 2 * lag >= length:
        raise DomainError(f"{name}={lag} must satisfy 0 <= {name} < length/2 (length={length})")
    return int(lag)


def check_positive_int(value, name):
    if not isinstance(value, numbers.Integral) or isinstance(value, bool) or value < 1:
        raise ConfigError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def make_rng(seed):
    """PCG64 generator seeded through ``SeedSequence``.

    Each simulation owns one generator; distinct seeds give independent
    substreams. Passing an existing Generator returns it unchanged.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, bool) or not isinstance(seed, numbers.Integral) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))
