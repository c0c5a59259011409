"""Euler-Maruyama integration of the diffusion approximation (Ito).

    dx = [-2 a x + F (1 - x^2) i(t)] dt + sqrt(4a/N + 2 h0 (1 - x^2)) dW

Only meant as a cross-check of the exact engine, so the scheme is the
plain first-order one.
"""

from dataclasses import dataclass
import math
import warnings

import numba
import numpy as np

from ._validation import make_rng
from .exceptions import ConfigError, DomainError, InvariantError
from .gillespie import DailySeries

CLAMP = "clamp"
REFLECT = "reflect"
BOUNDARY_POLICIES = (CLAMP, REFLECT)

_CHUNK_STEPS = 1 << 16


@dataclass(frozen=True)
class LangevinConfig:
    dt: float = 0.01
    boundary_policy: str = CLAMP
    seed: int = 0

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.dt > 0.1:
            warnings.warn(f"dt={self.dt} is coarse for the rate scales of this model", stacklevel=3)
        if self.boundary_policy not in BOUNDARY_POLICIES:
            raise ConfigError(f"boundary_policy must be one of {BOUNDARY_POLICIES}")
        spd = round(1.0 / self.dt)
        if abs(spd * self.dt - 1.0) > 1e-9:
            raise ConfigError(f"1/dt must be an integer number of steps per day, got dt={self.dt}")

    @property
    def steps_per_day(self):
        return int(round(1.0 / self.dt))


def drift(x, t, params, signal):
    """Deterministic part ``-2 a x + F (1 - x^2) i(t)``."""
    if abs(x) > 1.0:
        raise DomainError(f"|x| <= 1 required, got {x}")
    return _drift(x, params.a, params.F, signal.value_at(t))


def _drift(x, a, F, i):
    return -2.0 * a * x + F * (1.0 - x * x) * i


def diffusion_coefficient(x, params):
    """``4a/N + 2 h0 (1 - x^2)``: granularity floor plus herding noise."""
    if abs(x) > 1.0:
        raise DomainError(f"|x| <= 1 required, got {x}")
    return 4.0 * params.a / params.N + 2.0 * params.h0 * (1.0 - x * x)


@numba.njit(cache=True, nogil=True)
def _em_chunk(x, step, k, starts, values, dt, spd, a, h0, F, N, reflect, z, out, n_out):
    """Advance ``len(z)`` steps; writes x at day boundaries. Returns (x, step, k, n_out, ok)."""
    m = values.shape[0]
    floor = 4.0 * a / N
    for j in range(z.shape[0]):
        t = step * dt
        while k + 1 < m and starts[k + 1] <= t:
            k += 1
        i = values[k]
        one_m = 1.0 - x * x
        mu = -2.0 * a * x + F * one_m * i
        D = floor + 2.0 * h0 * one_m
        if D < 0.0:
            return x, step, k, n_out, False
        x = x + mu * dt + math.sqrt(D * dt) * z[j]
        if reflect:
            while x > 1.0 or x < -1.0:
                if x > 1.0:
                    x = 2.0 - x
                else:
                    x = -2.0 - x
        else:
            if x > 1.0:
                x = 1.0
            elif x < -1.0:
                x = -1.0
        step += 1
        if step % spd == 0 and n_out < out.shape[0]:
            out[n_out] = x
            n_out += 1
    return x, step, k, n_out, True


def integrate_langevin(params, signal, horizon=None, config=None, initial="random"):
    """Daily-sampled Euler-Maruyama path on days ``0..floor(horizon)``.

    ``initial='random'`` draws ``x0`` uniformly on [-1, 1] from the seeded
    stream; a float fixes it.
    """
    params.check()
    config = LangevinConfig() if config is None else config
    horizon = signal.end if horizon is None else float(horizon)
    if horizon > signal.end:
        raise ConfigError(f"horizon {horizon} exceeds the signal domain [0, {signal.end}]")
    rng = make_rng(config.seed)
    if isinstance(initial, str):
        if initial != "random":
            raise ConfigError(f"initial must be 'random' or a float, got {initial!r}")
        x = float(rng.uniform(-1.0, 1.0))
    else:
        x = float(initial)
        if abs(x) > 1.0:
            raise ConfigError(f"initial x0={x} outside [-1, 1]")
    days = int(math.floor(horizon))
    spd = config.steps_per_day
    total = days * spd
    out = np.empty(days + 1)
    out[0] = x
    n_out = 1
    step, k = 0, 0
    starts = np.ascontiguousarray(signal.release_times)
    values = np.ascontiguousarray(signal.values)
    reflect = config.boundary_policy == REFLECT
    while step < total:
        z = rng.standard_normal(min(_CHUNK_STEPS, total - step))
        x, step, k, n_out, ok = _em_chunk(
            x, step, k, starts, values, config.dt, spd,
            float(params.a), float(params.h0), float(params.F), float(params.N), reflect, z, out, n_out,
        )
        if not ok:
            raise InvariantError("negative diffusion coefficient after boundary handling")
    t = np.arange(days + 1, dtype=np.float64)
    return DailySeries(t=t, x=out, i=signal.daily(days))
