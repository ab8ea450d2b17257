"""Analytic security quantities for the high-dimensional round-robin DPS protocol.

Implements the eavesdropper-information upper bound, the error-rate lower
bound it pairs with, the two secret-key rates (with and without
signal-disturbance monitoring) and the error-threshold solver.

The information bound is evaluated literally as published, i.e. as

    zeta(C1*x1, C2*x2, ..., C2*x2) / (C1*(x1 + x2))

with one ``C1*x1`` entry and ``d-1`` copies of ``C2*x2``, where
``C1 = binom(L-1, d-1)`` and ``C2 = binom(L-2, d-2)``.  For ``(d-1)**2 >
L-1`` this expression can exceed ``log2 d`` (the off-diagonal weight is
counted once per slot), in which case the unmonitored key rate is negative
even at zero error.  The bound is reported as-is; callers that need a
non-negative rate clamp at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .core import BINOM_MAX_N, DomainError, binom, dit_entropy, weight_entropy

__all__ = [
    "AttackSplit",
    "KeyRateResult",
    "MaxIae",
    "ProtocolParams",
    "ThresholdResult",
    "error_cap",
    "error_lower_bound",
    "iae_bound",
    "max_iae",
    "rate_monitor",
    "rate_no_monitor",
    "threshold",
    "x1_from_error",
]

_SPLIT_SUM_TOL = 1e-12
# Coarse grid resolution for the one-dimensional information-bound maximization.
_GRID_POINTS = 1001
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ProtocolParams:
    """Protocol parameters: packet size ``L`` and encoding dimension ``d``."""

    L: int
    d: int

    def __post_init__(self):
        if not isinstance(self.L, int) or not isinstance(self.d, int):
            raise DomainError(f"L and d must be integers, got L={self.L!r}, d={self.d!r}")
        if not 2 <= self.d < self.L:
            raise DomainError(f"protocol requires 2 <= d < L, got L={self.L}, d={self.d}")
        if self.L > BINOM_MAX_N:
            raise DomainError(f"L <= {BINOM_MAX_N} required for exact binomials, got L={self.L}")


@dataclass(frozen=True)
class AttackSplit:
    """Normalized diagonal/off-diagonal attack weights ``(x1, x2)``, ``x1 + x2 = 1``."""

    x1: float
    x2: float

    def __post_init__(self):
        if self.x1 < 0.0 or self.x2 < 0.0:
            raise DomainError(f"attack weights must be non-negative, got {self.x1}, {self.x2}")
        if abs(self.x1 + self.x2 - 1.0) > _SPLIT_SUM_TOL:
            raise DomainError(
                f"attack weights must satisfy x1 + x2 = 1 within {_SPLIT_SUM_TOL}, "
                f"got sum {self.x1 + self.x2!r}"
            )


@dataclass(frozen=True)
class KeyRateResult:
    """Secret-key-rate evaluation at one error rate.

    ``rate_bits`` is the raw value in secret bits per sifted detection and may
    be negative; clamping to zero is left to the reporting layer.
    """

    params: ProtocolParams
    error_rate: float
    rate_bits: float
    iae_bits: float
    x1_used: float
    monitored: bool


class MaxIae(NamedTuple):
    """Maximizer and value of the information bound over the attack split."""

    x1: float
    value: float


@dataclass(frozen=True)
class ThresholdResult:
    """Error threshold of a key rate.

    ``positive_at_zero`` is False when the rate is already non-positive at
    ``E = 0`` (the threshold is then reported as 0).  ``at_domain_cap`` is True
    when the rate is still positive at the largest admissible error rate, which
    is then returned as the threshold.
    """

    value: float
    positive_at_zero: bool
    at_domain_cap: bool

    def __float__(self) -> float:
        return self.value


def iae_bound(params: ProtocolParams, split: AttackSplit) -> float:
    """Upper bound on the eavesdropper's information per sifted dit, in bits.

    Evaluates ``zeta(C1*x1, C2*x2, ..., C2*x2) / (C1*(x1+x2))`` with one
    diagonal entry and ``d-1`` off-diagonal entries (see the module note on
    the small-``L`` regime where this may exceed ``log2 d``).
    """
    c1 = binom(params.L - 1, params.d - 1)
    c2 = binom(params.L - 2, params.d - 2)
    weights = [c1 * split.x1] + [c2 * split.x2] * (params.d - 1)
    return weight_entropy(weights) / (c1 * (split.x1 + split.x2))


def error_cap(params: ProtocolParams) -> float:
    """Largest error rate expressible by the attack split: ``((d-1)/d)((L-d)/(L-1))``."""
    return ((params.d - 1) / params.d) * ((params.L - params.d) / (params.L - 1))


def error_lower_bound(params: ProtocolParams, split: AttackSplit) -> float:
    """Least error rate any attack with the given split must cause at the receiver."""
    return (
        ((params.d - 1) / params.d)
        * ((params.L - params.d) / (params.L - 1))
        * (split.x2 / (split.x1 + split.x2))
    )


def x1_from_error(params: ProtocolParams, error_rate: float) -> float:
    """Lower bound on the diagonal attack weight implied by an observed error rate.

    Returns ``1 - E * (d/(d-1)) * ((L-1)/(L-d))``, in ``[0, 1]``.

    Raises
    ------
    DomainError
        If ``error_rate`` is negative or exceeds :func:`error_cap`.
    """
    cap = error_cap(params)
    if error_rate < 0.0 or error_rate > cap:
        raise DomainError(
            f"error rate {error_rate} outside [0, {cap}] (cap for L={params.L}, d={params.d})"
        )
    x1 = 1.0 - error_rate * (params.d / (params.d - 1)) * ((params.L - 1) / (params.L - params.d))
    # Round-off at the cap can land a hair outside [0, 1].
    return min(1.0, max(0.0, x1))


def _iae_at(params: ProtocolParams, x1: float) -> float:
    return iae_bound(params, AttackSplit(x1, 1.0 - x1))


@lru_cache(maxsize=None)
def _max_iae_cached(L: int, d: int, tol: float) -> MaxIae:
    params = ProtocolParams(L, d)
    xs = [i / (_GRID_POINTS - 1) for i in range(_GRID_POINTS)]
    vals = [_iae_at(params, x) for x in xs]
    k = max(range(_GRID_POINTS), key=vals.__getitem__)
    lo = xs[max(k - 1, 0)]
    hi = xs[min(k + 1, _GRID_POINTS - 1)]
    # Golden-section refinement of the bracketing interval; the objective is
    # concave in x1 so the grid argmax brackets the maximizer.
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    e = a + _INVPHI * (b - a)
    fc = _iae_at(params, c)
    fe = _iae_at(params, e)
    while b - a > tol:
        if fc < fe:
            a, c, fc = c, e, fe
            e = a + _INVPHI * (b - a)
            fe = _iae_at(params, e)
        else:
            b, e, fe = e, c, fc
            c = b - _INVPHI * (b - a)
            fc = _iae_at(params, c)
    x_star = (a + b) / 2.0
    return MaxIae(x_star, _iae_at(params, x_star))


def max_iae(params: ProtocolParams, tol: float = 1e-9) -> MaxIae:
    """Maximize the information bound over ``x1`` in ``[0, 1]`` with ``x2 = 1 - x1``.

    Coarse 1001-point grid scan followed by golden-section refinement of the
    bracketing interval, to absolute argument tolerance ``tol``.  Deterministic
    for fixed inputs; results are cached per ``(L, d, tol)``.
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    return _max_iae_cached(params.L, params.d, float(tol))


def rate_no_monitor(params: ProtocolParams, error_rate: float, tol: float = 1e-9) -> KeyRateResult:
    """Secret key rate without signal-disturbance monitoring.

    ``log2 d - h_d(E) - max_x1 I_AE``; the eavesdropper term does not depend
    on the observed error rate.  The raw (possibly negative) rate is returned.
    """
    h = dit_entropy(error_rate, params.d)
    best = max_iae(params, tol)
    rate = math.log2(params.d) - h - best.value
    return KeyRateResult(
        params=params,
        error_rate=error_rate,
        rate_bits=rate,
        iae_bits=best.value,
        x1_used=best.x1,
        monitored=False,
    )


def rate_monitor(params: ProtocolParams, error_rate: float) -> KeyRateResult:
    """Secret key rate with signal-disturbance monitoring.

    Evaluates the information bound exactly at the monitored split
    ``(x1(E), 1 - x1(E))`` rather than maximizing over the constrained
    interval.  At ``E = 0`` this gives ``log2 d`` exactly.
    """
    h = dit_entropy(error_rate, params.d)
    x1 = x1_from_error(params, error_rate)
    iae = iae_bound(params, AttackSplit(x1, 1.0 - x1))
    rate = math.log2(params.d) - h - iae
    return KeyRateResult(
        params=params,
        error_rate=error_rate,
        rate_bits=rate,
        iae_bits=iae,
        x1_used=x1,
        monitored=True,
    )


def threshold(params: ProtocolParams, monitored: bool, tol: float = 1e-9) -> ThresholdResult:
    """Largest error rate at which the selected key rate stays positive.

    Bisection on the admissible error interval (``[0, error_cap]`` when
    monitoring, ``[0, (d-1)/d]`` otherwise) to absolute tolerance ``tol``.
    If the rate is non-positive already at ``E = 0`` the threshold is 0 with
    ``positive_at_zero=False``; if it is still positive at the interval end
    the end is returned with ``at_domain_cap=True``.
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    if monitored:
        hi = error_cap(params)
        rate_at = lambda e: rate_monitor(params, e).rate_bits
    else:
        hi = (params.d - 1) / params.d
        rate_at = lambda e: rate_no_monitor(params, e, tol).rate_bits
    if rate_at(0.0) <= 0.0:
        return ThresholdResult(0.0, positive_at_zero=False, at_domain_cap=False)
    if rate_at(hi) > 0.0:
        return ThresholdResult(hi, positive_at_zero=True, at_domain_cap=True)
    lo = 0.0
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if rate_at(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return ThresholdResult((lo + hi) / 2.0, positive_at_zero=True, at_domain_cap=False)
