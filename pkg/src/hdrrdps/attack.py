"""Brute-force verification of the collective-attack security bounds.

For small packets the eavesdropper's collective attack is represented
explicitly by its non-negative coefficient matrix ``c``, where ``c[j, l]`` is
the amplitude with which mode ``j`` is rerouted to mode ``l`` while an
orthonormal ancilla record ``|e_{jl}>`` is kept.  From it we build the exact
(non-normalized) ancilla states for each key value, compute the eavesdropper's
Holevo information and the induced error rate per receiver subset, and check
the subset-averaged quantities against the closed-form bounds in
:mod:`hdrrdps.bounds`.

Two error figures are computed deliberately:

* :func:`error_subset` / :func:`overall_error` follow the literal closed form,
  whose double sum runs over *all* subset row/column pairs including the
  diagonal.  The numerator then equals the subset yield, so the literal error
  is ``(d-1)/d`` for every unit-row-norm attack; this is the quantity the
  published inequality chain bounds from below.
* :func:`born_error_mc` is an independent physical-sanity oracle: it applies
  the coefficient matrix as a coherent amplitude map (no which-mode record),
  randomizes the sender's off-subset phases, and computes misidentification
  probabilities by the Born rule.  Under it the identity matrix causes no
  error at all.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

from .bounds import AttackSplit, ProtocolParams, error_lower_bound, iae_bound
from .core import DomainError

__all__ = [
    "AttackMatrix",
    "NonNormalizedDensity",
    "SubsetIndex",
    "VerificationReport",
    "ZeroYieldError",
    "ancilla_density",
    "born_error_mc",
    "error_subset",
    "holevo_subset",
    "overall_error",
    "overall_iae",
    "random_attack",
    "subset_yield",
    "subsets",
    "verify",
    "xsplit",
]

# Spectral tolerances for density-matrix validation and entropies.
HERMITIAN_TOL = 1e-12
PSD_EIGEN_TOL = -1e-10
EIGENVALUE_FLOOR = 1e-14
ROW_NORM_TOL = 1e-12

# Combinatorial cost cap for full-verification runs.
VERIFY_MAX_L = 8
VERIFY_MAX_D = 4


class ZeroYieldError(ValueError):
    """The receiver's subset has zero detection yield; per-subset quantities are undefined."""


@dataclass(frozen=True)
class SubsetIndex:
    """Receiver's chosen modes: strictly increasing 1-based indices."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) < 1:
            raise DomainError("subset must contain at least one mode")
        if idx[0] < 1 or any(a >= b for a, b in zip(idx, idx[1:])):
            raise DomainError(f"subset indices must be strictly increasing and >= 1, got {idx}")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    @property
    def zero_based(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.intp) - 1


@dataclass(frozen=True, eq=False)
class AttackMatrix:
    """Eavesdropper's coefficient matrix: non-negative with unit-norm rows."""

    c: np.ndarray

    def __post_init__(self):
        c = np.array(self.c, dtype=np.float64)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] < 2:
            raise DomainError(f"attack matrix must be square with L >= 2, got shape {c.shape}")
        if np.any(c < 0.0):
            raise DomainError("attack matrix entries must be non-negative")
        norms = np.einsum("ij,ij->i", c, c)
        bad = np.abs(norms - 1.0) > ROW_NORM_TOL
        if np.any(bad):
            i = int(np.argmax(bad))
            raise DomainError(
                f"attack matrix rows must have unit Euclidean norm within {ROW_NORM_TOL}; "
                f"row {i} has squared norm {norms[i]!r}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def L(self) -> int:
        return self.c.shape[0]


@dataclass(frozen=True, eq=False)
class NonNormalizedDensity:
    """Hermitian positive-semidefinite ancilla state with positive trace.

    ``basis`` lists the 1-based ancilla labels ``(j, l)`` that index the matrix
    rows/columns; ``eigenvalues`` is the ascending spectrum, computed once at
    construction (it doubles as the positivity check).
    """

    matrix: np.ndarray
    basis: tuple[tuple[int, int], ...]
    eigenvalues: np.ndarray = dataclasses.field(init=False, repr=False, default=None)

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DomainError(f"density matrix must be square, got shape {mat.shape}")
        if len(self.basis) != mat.shape[0]:
            raise DomainError("basis labels must match the matrix dimension")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
            raise DomainError(f"density matrix not Hermitian within {HERMITIAN_TOL}")
        ev = np.linalg.eigvalsh(mat)
        if ev[0] < PSD_EIGEN_TOL:
            raise DomainError(f"density matrix not positive semidefinite: min eigenvalue {ev[0]}")
        if float(np.real(np.trace(mat))) <= 0.0:
            raise DomainError("density matrix must have positive trace")
        mat.setflags(write=False)
        ev.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))


@dataclass(frozen=True)
class VerificationReport:
    """One attack checked against both closed-form bounds."""

    seed: int | None
    L: int
    d: int
    x1: float
    x2: float
    iae_numeric: float
    iae_bound: float
    err_numeric: float
    err_bound: float
    passed: bool

    CSV_HEADER = "seed,L,d,x1,x2,iae_numeric,iae_bound,err_numeric,err_bound,pass"

    def csv_row(self) -> str:
        seed = "" if self.seed is None else str(self.seed)
        nums = (self.x1, self.x2, self.iae_numeric, self.iae_bound, self.err_numeric, self.err_bound)
        return ",".join(
            [seed, str(self.L), str(self.d)]
            + [f"{v:.12g}" for v in nums]
            + ["true" if self.passed else "false"]
        )


def subsets(L: int, d: int) -> Iterator[SubsetIndex]:
    """All strictly increasing d-subsets of modes ``1..L`` in lexicographic order."""
    for combo in combinations(range(1, L + 1), d):
        yield SubsetIndex(combo)


def random_attack(L: int, seed: int, diag_bias: float) -> AttackMatrix:
    """Deterministic random attack matrix with tunable diagonal weight.

    Parameters
    ----------
    L : int
        Packet size, at least 3.
    seed : int
        Seed of the generator; fixed ``(seed, diag_bias)`` reproduce the matrix.
    diag_bias : float
        In ``[0, 1]``.  1 yields the identity matrix; 0 yields normalized
        uniform-random rows whose mass is spread across the whole row.

    Returns
    -------
    AttackMatrix
        Rows are non-negative with unit Euclidean norm.
    """
    if L < 3:
        raise DomainError(f"random_attack requires L >= 3, got {L}")
    if not 0.0 <= diag_bias <= 1.0:
        raise DomainError(f"diag_bias must lie in [0, 1], got {diag_bias}")
    rng = np.random.default_rng(seed)
    rows = rng.random((L, L))
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    mixed = (1.0 - diag_bias) * rows + diag_bias * np.eye(L)
    mixed /= np.linalg.norm(mixed, axis=1, keepdims=True)
    return AttackMatrix(mixed)


def xsplit(attack: AttackMatrix) -> AttackSplit:
    """Normalized diagonal/off-diagonal weight split of an attack matrix.

    ``x1 = sum_i c_ii^2 / L`` and ``x2 = sum_{i != j} c_ij^2 / L``; the row
    row-norm convention makes ``x1 + x2 = 1``.
    """
    c2 = attack.c * attack.c
    x1 = float(np.trace(c2)) / attack.L
    x2 = float(c2.sum() - np.trace(c2)) / attack.L
    return AttackSplit(x1, x2)


def _check_subset(attack: AttackMatrix, subset: SubsetIndex) -> np.ndarray:
    j = subset.zero_based
    if j[-1] >= attack.L:
        raise DomainError(f"subset {subset.indices} exceeds packet size L={attack.L}")
    return j


def subset_yield(attack: AttackMatrix, subset: SubsetIndex) -> float:
    """Detection yield of a subset: total squared amplitude landing on its columns."""
    j = _check_subset(attack, subset)
    return float(np.sum(attack.c[:, j] ** 2))


def ancilla_density(attack: AttackMatrix, subset: SubsetIndex, m: int) -> NonNormalizedDensity:
    """Eavesdropper's non-normalized ancilla state for key value ``m``.

    The state is block diagonal over the subset columns ``j_n``: each block
    holds the rank-one projector of the coherent in-subset component
    ``sum_p exp(i 2 pi m p / d) c[j_p, j_n] |e_{j_p j_n}>`` plus the diagonal
    dephased contributions ``c[l, j_n]^2`` of all off-subset rows ``l``.  The
    basis is restricted to ancilla labels with non-zero amplitude; its trace
    equals :func:`subset_yield` for every ``m``.
    """
    j = _check_subset(attack, subset)
    d = len(subset)
    if not 0 <= m < d:
        raise DomainError(f"key value m must lie in [0, {d - 1}], got {m}")
    c = attack.c
    labels: list[tuple[int, int]] = []
    for n, jn in enumerate(j):
        for ell in range(attack.L):
            if c[ell, jn] != 0.0:
                labels.append((ell + 1, int(jn) + 1))
    index = {lab: i for i, lab in enumerate(labels)}
    dim = len(labels)
    rho = np.zeros((dim, dim), dtype=np.complex128)
    in_subset = set(int(x) for x in j)
    for n, jn in enumerate(j):
        vec = np.zeros(dim, dtype=np.complex128)
        for p, jp in enumerate(j):
            amp = c[jp, jn]
            if amp != 0.0:
                vec[index[(int(jp) + 1, int(jn) + 1)]] = np.exp(2j * np.pi * m * p / d) * amp
        rho += np.outer(vec, vec.conj())
        for ell in range(attack.L):
            if ell not in in_subset and c[ell, jn] != 0.0:
                k = index[(ell + 1, int(jn) + 1)]
                rho[k, k] += c[ell, jn] ** 2
    return NonNormalizedDensity(rho, tuple(labels))


def _vn_entropy_from_eigenvalues(ev: np.ndarray) -> float:
    """Von Neumann entropy in bits from a (normalized) spectrum.

    Eigenvalues at or below EIGENVALUE_FLOOR are treated as exact zeros so
    that round-off never reaches the logarithm.
    """
    lam = ev[ev > EIGENVALUE_FLOOR]
    return float(-(lam * np.log2(lam)).sum())


def holevo_subset(attack: AttackMatrix, subset: SubsetIndex) -> float:
    """Exact Holevo information of the eavesdropper for one receiver subset, in bits.

    ``S(mean_m rho_m / Q) - mean_m S(rho_m / Q)`` with both terms computed by
    spectral decomposition of the explicitly constructed ancilla states.

    Raises
    ------
    ZeroYieldError
        If the subset has zero yield (no normalizable states).
    """
    d = len(subset)
    q = subset_yield(attack, subset)
    if q <= 0.0:
        raise ZeroYieldError(f"subset {subset.indices} has zero yield")
    states = [ancilla_density(attack, subset, m) for m in range(d)]
    mean_entropy = math.fsum(
        _vn_entropy_from_eigenvalues(s.eigenvalues / q) for s in states
    ) / d
    avg = sum(s.matrix for s in states) / (d * q)
    avg_entropy = _vn_entropy_from_eigenvalues(np.linalg.eigvalsh(avg))
    # Holevo quantity is non-negative; wash out round-off of order 1e-15.
    return max(0.0, avg_entropy - mean_entropy)


def error_subset(attack: AttackMatrix, subset: SubsetIndex) -> float:
    """Literal closed-form error rate of one subset.

    ``((d-1)/d) * (sum_{n,r in subset} c[j_r, j_n]^2
    + sum_{l not in subset} sum_n c[l, j_n]^2) / Q``; the double sum includes
    the ``r = n`` diagonal, so the value is ``(d-1)/d`` whenever rows have unit
    norm.  See :func:`born_error_mc` for the physical-sanity counterpart.
    """
    j = _check_subset(attack, subset)
    d = len(subset)
    q = subset_yield(attack, subset)
    if q <= 0.0:
        raise ZeroYieldError(f"subset {subset.indices} has zero yield")
    c2 = attack.c[:, j] ** 2
    mask_in = np.zeros(attack.L, dtype=bool)
    mask_in[j] = True
    within = float(np.sum(c2[mask_in, :]))
    outside = float(np.sum(c2[~mask_in, :]))
    return ((d - 1) / d) * (within + outside) / q


def overall_iae(attack: AttackMatrix, d: int) -> float:
    """Yield-weighted average of the exact Holevo information over all subsets."""
    nums, dens = _subset_average_terms(attack, d, holevo_subset)
    return nums / dens


def overall_error(attack: AttackMatrix, d: int) -> float:
    """Yield-weighted average of the literal closed-form error over all subsets."""
    nums, dens = _subset_average_terms(attack, d, error_subset)
    return nums / dens


def _subset_average_terms(attack: AttackMatrix, d: int, per_subset) -> tuple[float, float]:
    if not 2 <= d < attack.L:
        raise DomainError(f"need 2 <= d < L, got d={d}, L={attack.L}")
    qs = []
    vals = []
    for subset in subsets(attack.L, d):
        q = subset_yield(attack, subset)
        if q <= 0.0:
            qs.append(0.0)
            vals.append(0.0)
        else:
            qs.append(q)
            vals.append(per_subset(attack, subset))
    qs = np.asarray(qs)
    vals = np.asarray(vals)
    total = float(np.sum(qs))  # pairwise reduction in lexicographic subset order
    if total <= 0.0:
        raise ZeroYieldError("every subset has zero yield")
    return float(np.sum(qs * vals)), total


def born_error_mc(attack: AttackMatrix, d: int, trials: int = 2000, seed: int = 0) -> float:
    """Monte Carlo misidentification probability under coherent rerouting.

    Independent physical-sanity oracle for :func:`overall_error`: the
    coefficient matrix acts as a coherent amplitude map on the packet (the
    eavesdropper keeps no which-mode record), the sender's off-subset phases
    are randomized uniformly, and the receiver's outcome distribution follows
    from the Born rule on the renormalized subset state.  Detection-weighted
    over uniformly drawn subsets and sifted packets.  The identity matrix
    yields exactly 0.
    """
    if not 2 <= d < attack.L:
        raise DomainError(f"need 2 <= d < L, got d={d}, L={attack.L}")
    if trials < 1:
        raise DomainError(f"trials must be positive, got {trials}")
    rng = np.random.default_rng(seed)
    L = attack.L
    c = attack.c
    modes = np.arange(d)
    wrong_mass = 0.0
    total_mass = 0.0
    for _ in range(trials):
        j = np.sort(rng.choice(L, size=d, replace=False))
        m = int(rng.integers(d))
        offset = int(rng.integers(d))
        k = rng.integers(0, d, size=L)
        k[j] = (offset + m * modes) % d
        sender = np.exp(2j * np.pi * k / d)
        # a_n = sum_j e^{i 2 pi k_j / d} c[j, j_n]; constants cancel in the ratio
        amp = np.array([np.sum(sender * c[:, jn]) for jn in j])
        proj = np.exp(-2j * np.pi * np.outer(modes, modes) / d) @ amp
        w = np.abs(proj) ** 2
        total_mass += float(w.sum())
        wrong_mass += float(w.sum() - w[m])
    if total_mass <= 0.0:
        raise ZeroYieldError("no detection mass accumulated over the sampled subsets")
    return wrong_mass / total_mass


def verify(
    attack: AttackMatrix, d: int, tol: float = 1e-9, seed: int | None = None
) -> VerificationReport:
    """Check one attack against both closed-form bounds.

    Passes iff ``overall_iae <= iae_bound(xsplit) + tol`` and
    ``overall_error >= error_lower_bound(xsplit) - tol``.

    Raises
    ------
    DomainError
        If ``L > 8`` or ``d > 4`` (combinatorial cost cap), or ``d >= L``.
    """
    if attack.L > VERIFY_MAX_L or d > VERIFY_MAX_D:
        raise DomainError(
            f"verify is capped at L <= {VERIFY_MAX_L} and d <= {VERIFY_MAX_D}, "
            f"got L={attack.L}, d={d}"
        )
    params = ProtocolParams(attack.L, d)
    split = xsplit(attack)
    iae_num = overall_iae(attack, d)
    iae_lim = iae_bound(params, split)
    err_num = overall_error(attack, d)
    err_lim = error_lower_bound(params, split)
    passed = (iae_num <= iae_lim + tol) and (err_num >= err_lim - tol)
    return VerificationReport(
        seed=seed,
        L=attack.L,
        d=d,
        x1=split.x1,
        x2=split.x2,
        iae_numeric=iae_num,
        iae_bound=iae_lim,
        err_numeric=err_num,
        err_bound=err_lim,
        passed=passed,
    )
