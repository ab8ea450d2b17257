"""Shared numeric kernel: entropy functionals and exact binomial coefficients.

Every quantity is measured in bits (base-2 logarithms) and every real is a
64-bit float.  The ``0 * log2(0) = 0`` convention is centralized in
:func:`entropy_term`; no other module branches on zero probabilities.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "BINOM_MAX_N",
    "DomainError",
    "binom",
    "dit_entropy",
    "entropy_term",
    "sift_probability",
    "weight_entropy",
]

# Exact integer binomials are only guaranteed up to this n; larger packets are
# out of scope for the whole library.
BINOM_MAX_N = 128
_LN2 = math.log(2.0)


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


def binom(n: int, k: int) -> int:
    """Binomial coefficient ``n! / (k! (n-k)!)`` with exact integer arithmetic.

    Parameters
    ----------
    n, k : int
        Non-negative integers.  ``k > n`` is allowed and yields 0.

    Returns
    -------
    int
        The exact coefficient.

    Raises
    ------
    DomainError
        If either argument is negative or not an integer.
    OverflowError
        If ``n`` exceeds :data:`BINOM_MAX_N`, the cap below which results are
        guaranteed exact everywhere they are consumed.
    """
    if not isinstance(n, (int, np.integer)) or not isinstance(k, (int, np.integer)):
        raise DomainError(f"binom expects integers, got {n!r}, {k!r}")
    if n < 0 or k < 0:
        raise DomainError(f"binom expects non-negative arguments, got n={n}, k={k}")
    if n > BINOM_MAX_N:
        raise OverflowError(
            f"binom(n={n}, k={k}) exceeds the exact-arithmetic cap n <= {BINOM_MAX_N}"
        )
    if k > n:
        return 0
    return math.comb(int(n), int(k))


def entropy_term(w: float) -> float:
    """Single entropy contribution ``-w * log2(w)`` with ``entropy_term(0) = 0``.

    Parameters
    ----------
    w : float
        A weight in ``[0, 1]`` for probability use, or any non-negative real.

    Returns
    -------
    float
        ``-w log2 w``, exactly 0.0 at ``w = 0`` and ``w = 1``.
    """
    if w < 0.0:
        raise DomainError(f"entropy_term expects w >= 0, got {w}")
    if w == 0.0:
        return 0.0
    return -w * math.log2(w)


def weight_entropy(weights) -> float:
    """Entropy functional of an unnormalized non-negative weight vector.

    For weights ``w`` with total ``s = sum(w)`` this returns

        ``-sum_i w_i log2 w_i + s log2 s  =  s * H(w / s)``,

    i.e. the total weight times the Shannon entropy of the normalized
    distribution.  It is homogeneous of degree one, concave, symmetric and
    non-negative, and vanishes exactly when at most one weight is non-zero.

    Parameters
    ----------
    weights : array_like
        One or more non-negative reals.

    Returns
    -------
    float
        The functional value in bits; guaranteed ``>= 0``.

    Raises
    ------
    DomainError
        If the vector is empty or any entry is negative.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size < 1:
        raise DomainError("weight_entropy expects a non-empty 1-d weight vector")
    if np.any(w < 0.0):
        raise DomainError("weight_entropy expects non-negative weights")
    values = [float(x) for x in w]
    s = math.fsum(values)
    if s == 0.0:
        return 0.0
    # Termwise w_i * log2(s / w_i): every term is non-negative, so the result
    # cannot go negative through cancellation.  At most one weight can exceed
    # s/2; its ratio is near 1 and is evaluated through log1p of the exactly
    # accumulated remainder to keep full relative accuracy (and an exact zero
    # when it is the only non-zero weight).
    imax = max(range(len(values)), key=values.__getitem__)
    total = 0.0
    for i, x in enumerate(values):
        if x == 0.0:
            continue
        if i == imax and 2.0 * x > s:
            rest = math.fsum(v for j, v in enumerate(values) if j != i)
            total += x * math.log1p(rest / x) / _LN2
        else:
            total += x * math.log2(s / x)
    return total


def dit_entropy(error_rate: float, dim: int) -> float:
    """Shannon entropy of a symmetric dit error channel, in bits.

    ``h_dim(E) = -E log2(E / (dim-1)) - (1-E) log2(1-E)``: the entropy of an
    outcome that is correct with probability ``1-E`` and uniformly spread over
    the ``dim-1`` wrong values otherwise.  Monotone increasing on the domain
    ``0 <= E <= (dim-1)/dim`` with maximum ``log2 dim`` at the right endpoint.

    Raises
    ------
    DomainError
        If ``dim < 2`` or ``error_rate`` is outside ``[0, (dim-1)/dim]``.
    """
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise DomainError(f"dit_entropy expects an integer dim >= 2, got {dim!r}")
    cap = (dim - 1) / dim
    if not 0.0 <= error_rate <= cap:
        raise DomainError(
            f"dit_entropy expects 0 <= error_rate <= (dim-1)/dim = {cap}, got {error_rate}"
        )
    return (
        entropy_term(error_rate)
        + entropy_term(1.0 - error_rate)
        + error_rate * math.log2(dim - 1)
    )


def sift_probability(d: int) -> float:
    """Fraction of uniform phase tuples on ``d`` modes that form a Fourier-basis element.

    There are ``d**2`` tuples of the form ``k_n = (c + m*n) mod d`` out of
    ``d**d`` equally likely tuples, so the kept fraction is ``d**(2-d)``.
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise DomainError(f"sift_probability expects an integer d >= 2, got {d!r}")
    return (d * d) / (d ** d)
