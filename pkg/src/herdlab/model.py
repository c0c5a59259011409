"""Model parameters, transition rates and the opinion index.

The market holds ``N`` noise traders, ``n`` of them optimistic. Traders
switch idiosyncratically at rate ``a`` and copy a trader of the opposite
camp with herding intensity ``h``. In the driven model the herding
coefficient is modulated by an external signal ``i(t)`` of strength ``F``::

    h_plus(t)  = h0 + (F/N) i(t)
    h_minus(t) = h0 - (F/N) i(t)
"""

from dataclasses import dataclass
import numbers

from .exceptions import ConfigError, DomainError

# relative slack on F/N <= h0 so that F = N*h0 typed in decimal is accepted
_FN_RTOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Market parameters.

    Parameters
    ----------
    N : int
        Number of noise traders.
    a : float
        Idiosyncratic switching rate (1/day).
    h0 : float
        Background herding coefficient (1/day).
    F : float
        Strength of the external information on the whole market (1/day).
    allow_absorbing : bool
        Accept ``a == 0``, which makes the consensus states absorbing.
    """

    N: int
    a: float
    h0: float
    F: float = 0.0
    allow_absorbing: bool = False

    @property
    def epsilon(self):
        """Ratio ``a / h0``; the one parameter that survives a rescaling of time."""
        return self.a / self.h0

    @property
    def per_agent_intensity(self):
        return self.F / self.N

    def closed(self):
        """Copy of these parameters with the signal switched off."""
        return ModelParams(self.N, self.a, self.h0, 0.0, self.allow_absorbing)

    def check(self):
        """Raise :class:`ConfigError` listing every violated invariant."""
        problems = validate_params(self)
        if problems:
            raise ConfigError("invalid model parameters: " + "; ".join(problems))
        return self


def validate_params(params):
    """Return the list of violated invariants (empty when valid)."""
    problems = []
    N, a, h0, F = params.N, params.a, params.h0, params.F
    if not isinstance(N, numbers.Integral) or isinstance(N, bool):
        problems.append(f"N must be an integer, got {N!r}")
    elif N < 2:
        problems.append(f"N >= 2 required, got N={N}")
    for name, value in (("a", a), ("h0", h0), ("F", F)):
        if not isinstance(value, numbers.Real) or value != value:
            problems.append(f"{name} must be a real number, got {value!r}")
    if problems:
        return problems
    if a < 0:
        problems.append(f"a >= 0 required, got a={a}")
    elif a == 0 and not params.allow_absorbing:
        problems.append("a > 0 required (a = 0 makes consensus absorbing; pass allow_absorbing)")
    if h0 <= 0:
        problems.append(f"h0 > 0 required, got h0={h0}")
    if F < 0:
        problems.append(f"F >= 0 required, got F={F}")
    if h0 > 0 and F / N > h0 * (1 + _FN_RTOL):
        problems.append(f"F/N <= h0 required, got F/N={F / N:.6g} > h0={h0:.6g}")
    return problems


def opinion_index(n, N):
    """Intensive opinion variable ``2n/N - 1`` in [-1, 1]."""
    if N < 2:
        raise DomainError(f"N >= 2 required, got {N}")
    if n < 0 or n > N:
        raise DomainError(f"n={n} outside [0, {N}]")
    return 2.0 * n / N - 1.0


def _check_n(n, N):
    if n < 0 or n > N:
        raise DomainError(f"n={n} outside [0, {N}]")


def rates_closed(n, params):
    """Whole-system rates ``(pi_plus, pi_minus)`` of the undriven model."""
    N = params.N
    _check_n(n, N)
    h = params.h0
    return (N - n) * (params.a + h * n), n * (params.a + h * (N - n))


def herding_from_signal(i, params):
    """Herding coefficients for a given signal value ``i``."""
    shift = params.F / params.N * i
    h_plus = params.h0 + shift
    h_minus = params.h0 - shift
    # F/N == h0 with |i| == 1 can leave a rounding-level negative
    tol = 4e-16 * params.h0
    if h_plus < 0.0 and h_plus > -tol:
        h_plus = 0.0
    if h_minus < 0.0 and h_minus > -tol:
        h_minus = 0.0
    return h_plus, h_minus


def herding_coefficients(t, params, signal):
    """``(h_plus, h_minus)`` at time ``t``; raises DomainError outside the signal."""
    return herding_from_signal(signal.value_at(t), params)


def rates_from_signal(n, i, params):
    N = params.N
    _check_n(n, N)
    h_plus, h_minus = herding_from_signal(i, params)
    return (N - n) * (params.a + h_plus * n), n * (params.a + h_minus * (N - n))


def rates_open(n, t, params, signal):
    """Whole-system rates ``(pi_plus, pi_minus)`` of the driven model at time ``t``."""
    return rates_from_signal(n, signal.value_at(t), params)
