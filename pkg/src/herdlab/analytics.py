"""Stationary distribution and effective potentials.

With ``eps = a/h`` and ``s = sqrt(1 + 2 eps / N)`` the stationary density
of the undriven diffusion is

    P(x) = Z^-1 [a/(2Nh) + (1 - x^2)/4]^(eps - 1) = Z^-1 ((s^2 - x^2)/4)^(eps - 1)

on [-1, 1]. Substituting ``x = s (2u - 1)`` turns every integral of ``P``
into a difference of incomplete beta functions ``B[u; eps, eps]``, which
gives both the normalization and exact histogram cell masses.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate

from .exceptions import DomainError
from .model import ModelParams

BIMODAL = "bimodal"
UNIFORM = "uniform"
UNIMODAL = "unimodal"

_UNIFORM_TOL = 1e-12
_CF_EPS = 1e-16
_CF_MAXITER = 10000
_TINY = 1e-300


def _log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _beta_cf(x, a, b):
    """Continued fraction for I_x(a, b) (modified Lentz). None if it stalls."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAXITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    return None


def _incomplete_beta_quad(x, a, b):
    # algebraic weight absorbs the u^(a-1) endpoint singularity
    val, _ = integrate.quad(
        lambda u: (1.0 - u) ** (b - 1.0), 0.0, x, weight="alg", wvar=(a - 1.0, 0.0),
        epsabs=0.0, epsrel=1e-13, limit=500,
    )
    return val


def _check_beta_args(x, a, b):
    if not (a > 0 and b > 0):
        raise DomainError(f"incomplete beta needs a > 0 and b > 0, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"incomplete beta needs x in [0, 1], got x={x}")


def regularized_incomplete_beta(x, a, b):
    """``I_x(a, b) = B[x; a, b] / B(a, b)``."""
    _check_beta_args(x, a, b)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log1p(-x) - _log_beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        cf = _beta_cf(x, a, b)
        if cf is not None:
            return math.exp(log_front) * cf / a
    else:
        cf = _beta_cf(1.0 - x, b, a)
        if cf is not None:
            return 1.0 - math.exp(log_front) * cf / b
    return _incomplete_beta_quad(x, a, b) / math.exp(_log_beta(a, b))


def incomplete_beta(x, a, b):
    """Unregularized incomplete beta ``int_0^x u^(a-1) (1-u)^(b-1) du``."""
    _check_beta_args(x, a, b)
    if x == 0.0:
        return 0.0
    beta = math.exp(_log_beta(a, b))
    if x <= (a + 1.0) / (a + b + 2.0):
        cf = _beta_cf(x, a, b)
        if cf is None:
            return _incomplete_beta_quad(x, a, b)
        return math.exp(a * math.log(x) + b * math.log1p(-x)) * cf / a
    if x == 1.0:
        return beta
    cf = _beta_cf(1.0 - x, b, a)
    if cf is None:
        return _incomplete_beta_quad(x, a, b)
    return beta - math.exp(b * math.log1p(-x) + a * math.log(x)) * cf / b


def classify_regime(params):
    """``bimodal`` if a < h0, ``uniform`` if a == h0 (to 1e-12), else ``unimodal``."""
    d = params.a / params.h0 - 1.0
    if abs(d) <= _UNIFORM_TOL:
        return UNIFORM
    return BIMODAL if d < 0 else UNIMODAL


@dataclass(frozen=True)
class StationaryDensity:
    """Normalized stationary law of the undriven model."""

    params: ModelParams
    normalization: float
    classification: str

    @property
    def epsilon(self):
        return self.params.a / self.params.h0

    @property
    def _s(self):
        return math.sqrt(1.0 + 2.0 * self.epsilon / self.params.N)

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        if np.any(np.abs(x) > 1.0):
            raise DomainError("stationary density is defined on [-1, 1]")
        eps = self.epsilon
        if self.classification == UNIFORM:
            return np.full_like(x, self.normalization)
        s2 = self._s ** 2
        out = self.normalization * ((s2 - x * x) / 4.0) ** (eps - 1.0)
        return out if out.ndim else float(out)

    def cdf(self, x):
        """``P(X <= x)`` in closed form."""
        x = np.clip(np.asarray(x, dtype=np.float64), -1.0, 1.0)
        eps, s = self.epsilon, self._s
        lo = (1.0 - 1.0 / s) / 2.0
        lo_i = regularized_incomplete_beta(lo, eps, eps)
        span = 1.0 - 2.0 * lo_i
        f = np.vectorize(lambda v: (regularized_incomplete_beta((1.0 + v / s) / 2.0, eps, eps) - lo_i) / span)
        out = f(x)
        return out if out.ndim else float(out)

    def cell_masses(self, edges):
        """Probability mass of each interval ``[edges[k], edges[k+1]]``."""
        edges = np.asarray(edges, dtype=np.float64)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise DomainError("edges must be strictly increasing with at least two entries")
        return np.diff(self.cdf(edges))


def _normalization(eps, N):
    if abs(eps - 1.0) <= _UNIFORM_TOL:
        return 0.5
    s = math.sqrt(1.0 + 2.0 * eps / N)
    lo = (1.0 - 1.0 / s) / 2.0
    # B[1-lo] - B[lo] == B(eps, eps) (1 - 2 I_lo) by symmetry of the integrand
    log_db = _log_beta(eps, eps) + math.log1p(-2.0 * regularized_incomplete_beta(lo, eps, eps))
    return 0.5 * math.exp((1.0 - 2.0 * eps) * math.log(s) - log_db)


def stationary_density(params):
    """Build the :class:`StationaryDensity` for ``params`` with the signal switched off."""
    params = params.closed().check()
    if params.a <= 0:
        raise DomainError("the stationary law requires a > 0")
    eps = params.a / params.h0
    return StationaryDensity(params, _normalization(eps, params.N), classify_regime(params))


def stationary_pdf(x, params):
    """Stationary density at ``x``. Finite at the consensus states for finite N."""
    return stationary_density(params).pdf(x)


def unnormalized_stationary_pdf(x, params):
    eps = params.a / params.h0
    return (params.a / (2.0 * params.N * params.h0) + (1.0 - np.asarray(x) ** 2) / 4.0) ** (eps - 1.0)


def normalization_by_quadrature(params):
    """Independent ``Z^-1`` from adaptive quadrature of the unnormalized density."""
    total, _ = integrate.quad(
        lambda x: unnormalized_stationary_pdf(x, params), -1.0, 1.0,
        epsabs=0.0, epsrel=1e-12, limit=500, points=[0.0],
    )
    return 1.0 / total


def effective_potential(x, params, i=0.0):
    """``(h0 - a) ln(1 - x^2) - x F i`` for ``|x| < 1``.

    Its minima are the attractors of drift plus multiplicative noise; the
    linear term tilts the wells toward the sign of the signal.
    """
    x = np.asarray(x, dtype=np.float64)
    if np.any(np.abs(x) >= 1.0):
        raise DomainError("effective potential diverges at |x| >= 1")
    out = (params.h0 - params.a) * np.log1p(-x * x) - x * params.F * i
    return out if out.ndim else float(out)


def grid(points=1001, lo=-0.999, hi=0.999):
    if points < 2:
        raise DomainError("grid needs at least two points")
    return np.linspace(lo, hi, points)


def exact_discrete_stationary(params):
    """Stationary law of the finite birth-death chain by detailed balance.

    Used as an oracle for the simulator; it differs from the diffusion
    density by finite-size corrections.
    """
    N, a, h = params.N, params.a, params.h0
    n = np.arange(N)
    up = (N - n) * (a + h * n)
    down = (n + 1) * (a + h * (N - n - 1))
    logp = np.concatenate(([0.0], np.cumsum(np.log(up) - np.log(down))))
    p = np.exp(logp - logp.max())
    return p / p.sum()


def state_cell_edges(N):
    """N+1 equal cells tiling [-1, 1], one per attainable state ``n``."""
    return np.linspace(-1.0, 1.0, N + 2)
