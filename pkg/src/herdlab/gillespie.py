"""Exact event-driven simulation with piecewise-constant time-dependent rates.

Between events ``n`` is fixed, and the signal is constant on each release
segment, so both whole-system rates are piecewise constant in time. For
each direction the waiting time solves

    integral_{t1}^{t2} pi(t) dt = -ln(1 - u)

which is inverted in closed form by walking the segments. Two fresh
uniforms are drawn per event (``u_plus`` first); the earlier of the two
candidate times wins, ties going to ``+1``.

Uniforms come from a PCG64 stream consumed strictly in order, so a
trajectory depends only on ``(params, signal, horizon, seed, initial)``.
"""

import csv
from dataclasses import dataclass
import math
from typing import NamedTuple

import numba
import numpy as np

from ._validation import make_rng
from .exceptions import ConfigError, DomainError, InvariantError
from .model import ModelParams, opinion_index

HORIZON = "horizon-reached"
FROZEN = "frozen"

# status codes shared with the compiled kernel
_NEED_MORE = 0
_HORIZON = 1
_FROZEN = 2
_NEGATIVE_RATE = 3

_CHUNK_EVENTS = 1 << 16


class Transition(NamedTuple):
    time: float
    direction: int


@dataclass(frozen=True)
class SystemState:
    n: int
    t: float = 0.0


@numba.njit(cache=True, nogil=True)
def _segment_rates(n, N, a, h0, F, i):
    shift = F / N * i
    hp = h0 + shift
    hm = h0 - shift
    tol = 4e-16 * h0
    if hp < 0.0 and hp > -tol:
        hp = 0.0
    if hm < 0.0 and hm > -tol:
        hm = 0.0
    return (N - n) * (a + hp * n), n * (a + hm * (N - n))


@numba.njit(cache=True, nogil=True)
def _is_frozen(n, k, horizon, starts, values, N, a, h0, F):
    m = values.shape[0]
    while k < m and starts[k] < horizon:
        rp, rm = _segment_rates(n, N, a, h0, F, values[k])
        if rp != 0.0 or rm != 0.0:
            return False
        k += 1
    return True


@numba.njit(cache=True, nogil=True)
def _solve_next(n, t, k, horizon, starts, ends, values, N, a, h0, F, u_plus, u_minus):
    """Return (status, time, direction, segment index)."""
    left_p = -math.log(1.0 - u_plus)
    left_m = -math.log(1.0 - u_minus)
    cur = t
    m = values.shape[0]
    while k < m:
        seg_end = ends[k]
        if seg_end > horizon:
            seg_end = horizon
        rp, rm = _segment_rates(n, N, a, h0, F, values[k])
        if rp < 0.0 or rm < 0.0:
            return _NEGATIVE_RATE, cur, 0, k
        span = seg_end - cur
        t_p = np.inf
        t_m = np.inf
        if rp > 0.0 and rp * span >= left_p:
            t_p = cur + left_p / rp
        if rm > 0.0 and rm * span >= left_m:
            t_m = cur + left_m / rm
        if t_p < np.inf or t_m < np.inf:
            if t_p <= t_m:
                t2 = t_p
                d = 1
            else:
                t2 = t_m
                d = -1
            if t2 >= horizon:
                return _HORIZON, horizon, 0, k
            return _NEED_MORE, t2, d, k
        left_p -= rp * span
        left_m -= rm * span
        if seg_end >= horizon:
            return _HORIZON, horizon, 0, k
        cur = seg_end
        k += 1
    return _HORIZON, horizon, 0, k


@numba.njit(cache=True, nogil=True)
def _run_chunk(n, t, k, horizon, starts, ends, values, N, a, h0, F, uniforms, out_t, out_d):
    """Consume uniforms pairwise; returns (status, n, t, k, n_events)."""
    count = 0
    pos = 0
    n_u = uniforms.shape[0]
    while pos + 1 < n_u:
        if _is_frozen(n, k, horizon, starts, values, N, a, h0, F):
            return _FROZEN, n, t, k, count
        status, t2, d, k2 = _solve_next(
            n, t, k, horizon, starts, ends, values, N, a, h0, F, uniforms[pos], uniforms[pos + 1]
        )
        pos += 2
        if status != _NEED_MORE:
            return status, n, t, k2, count
        t = t2
        k = k2
        # an event landing exactly on a release belongs to the next segment
        while k + 1 < values.shape[0] and starts[k + 1] <= t:
            k += 1
        n += d
        out_t[count] = t
        out_d[count] = d
        count += 1
    return _NEED_MORE, n, t, k, count


def _signal_arrays(signal):
    return (
        np.ascontiguousarray(signal.release_times),
        np.ascontiguousarray(signal.segment_ends),
        np.ascontiguousarray(signal.values),
    )


def next_event(state, signal, params, rng, horizon=None):
    """Draw the next transition from ``state``.

    Returns a :class:`Transition`, or the sentinel :data:`FROZEN` when no
    rate can become positive before the horizon, or :data:`HORIZON` when
    both candidate times fall at or beyond the horizon.
    """
    horizon = signal.end if horizon is None else float(horizon)
    if horizon > signal.end:
        raise DomainError(f"horizon {horizon} beyond signal end {signal.end}")
    if not 0 <= state.n <= params.N:
        raise DomainError(f"n={state.n} outside [0, {params.N}]")
    if not state.t < horizon:
        return HORIZON
    starts, ends, values = _signal_arrays(signal)
    k = signal.segment_index(state.t)
    args = (params.N, float(params.a), float(params.h0), float(params.F))
    if _is_frozen(state.n, k, horizon, starts, values, *args):
        return FROZEN
    u_plus = rng.random()
    u_minus = rng.random()
    status, t2, d, _ = _solve_next(
        state.n, float(state.t), k, horizon, starts, ends, values, *args, u_plus, u_minus
    )
    if status == _NEGATIVE_RATE:
        raise InvariantError("negative transition rate encountered")
    if status == _HORIZON:
        return HORIZON
    return Transition(float(t2), int(d))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Event-resolved path: event times and directions (+1/-1)."""

    times: np.ndarray
    directions: np.ndarray
    initial_n: int
    params: ModelParams
    seed: int
    horizon: float
    signal: object = None
    status: str = HORIZON

    @property
    def events(self):
        return list(zip(self.times.tolist(), self.directions.tolist()))

    @property
    def n_events(self):
        return int(self.times.size)

    def n_path(self):
        """Occupation ``n`` after each event, preceded by ``initial_n``."""
        return self.initial_n + np.concatenate(([0], np.cumsum(self.directions, dtype=np.int64)))

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "direction"])
            for t, d in zip(self.times.tolist(), self.directions.tolist()):
                w.writerow([repr(t), d])


@dataclass(frozen=True, eq=False)
class DailySeries:
    """Opinion index ``x`` and signal ``i`` sampled on integer days."""

    t: np.ndarray
    x: np.ndarray
    i: np.ndarray

    def __len__(self):
        return int(self.t.size)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "x", "i"])
            for t, x, i in zip(self.t.tolist(), self.x.tolist(), self.i.tolist()):
                w.writerow([int(t), repr(x), repr(i)])


def _initial_n(initial, N, rng):
    if isinstance(initial, str):
        if initial != "random":
            raise ConfigError(f"initial must be 'random' or an integer, got {initial!r}")
        return int(rng.integers(0, N + 1))
    n0 = int(initial)
    if n0 != initial or not 0 <= n0 <= N:
        raise ConfigError(f"initial n0={initial!r} must be an integer in [0, {N}]")
    return n0


def simulate(params, signal, horizon=None, seed=0, initial="random"):
    """Run the exact simulation until the horizon or a frozen state.

    ``initial='random'`` draws ``n0`` uniformly from ``0..N`` using the
    same seeded stream, before any event uniforms.
    """
    params.check()
    horizon = signal.end if horizon is None else float(horizon)
    if horizon > signal.end:
        raise ConfigError(f"horizon {horizon} exceeds the signal domain [0, {signal.end}]")
    if horizon <= 0:
        raise ConfigError(f"horizon must be positive, got {horizon}")
    rng = make_rng(seed)
    n0 = _initial_n(initial, params.N, rng)
    starts, ends, values = _signal_arrays(signal)
    N, a, h0, F = params.N, float(params.a), float(params.h0), float(params.F)

    n, t, k = n0, 0.0, 0
    out_t = np.empty(_CHUNK_EVENTS)
    out_d = np.empty(_CHUNK_EVENTS, dtype=np.int8)
    times, dirs = [], []
    while True:
        uniforms = rng.random(2 * _CHUNK_EVENTS)
        status, n, t, k, count = _run_chunk(
            n, t, k, horizon, starts, ends, values, N, a, h0, F, uniforms, out_t, out_d
        )
        times.append(out_t[:count].copy())
        dirs.append(out_d[:count].copy())
        if status == _NEGATIVE_RATE:
            raise InvariantError("negative transition rate encountered")
        if status != _NEED_MORE:
            break
    traj = Trajectory(
        times=np.concatenate(times),
        directions=np.concatenate(dirs),
        initial_n=n0,
        params=params,
        seed=seed if not isinstance(seed, np.random.Generator) else None,
        horizon=horizon,
        signal=signal,
        status=FROZEN if status == _FROZEN else HORIZON,
    )
    traj.times.setflags(write=False)
    traj.directions.setflags(write=False)
    return traj


def sample_daily(trajectory, signal=None):
    """Hold-last sampling of the opinion index at days ``0..floor(horizon)``.

    The value at day ``k`` includes every event with time ``<= k``.
    """
    signal = trajectory.signal if signal is None else signal
    N = trajectory.params.N
    days = np.arange(int(np.floor(trajectory.horizon)) + 1, dtype=np.float64)
    idx = np.searchsorted(trajectory.times, days, side="right")
    n = trajectory.n_path()[idx]
    x = 2.0 * n / N - 1.0
    i = signal.daily(days[-1]) if signal is not None else np.zeros_like(x)
    return DailySeries(t=days, x=x, i=i)


def stationary_occupation(trajectory):
    """Fraction of time spent in each state ``n`` over ``[0, horizon]``."""
    N = trajectory.params.N
    bounds = np.concatenate(([0.0], trajectory.times, [trajectory.horizon]))
    dwell = np.diff(bounds)
    return np.bincount(trajectory.n_path(), weights=dwell, minlength=N + 1) / trajectory.horizon


__all__ = [
    "FROZEN",
    "HORIZON",
    "DailySeries",
    "SystemState",
    "Trajectory",
    "Transition",
    "next_event",
    "opinion_index",
    "sample_daily",
    "simulate",
    "stationary_occupation",
]
