"""Monte Carlo simulation of honest protocol rounds.

Each round: the sender draws uniform phase indices for all ``L`` modes, the
receiver picks a uniform ``d``-subset and measures in the Fourier basis of
that subset; channel loss, mode-mismatch flips and detector dark counts are
applied; rounds are kept (sifted) when the sender's phases on the chosen
subset form a Fourier-basis element.

Randomness layout
-----------------
:func:`run` draws from a counter-based Philox stream keyed by the seed.  Every
round owns a fixed, contiguous block of raw 64-bit words (``2L + d + 4`` words,
padded to whole 4-word counter blocks), so round ``r`` can be regenerated by
seeking to its block: results are identical no matter how rounds are chunked
or distributed, and a fixed seed replays bit-identically.

Detection convention
--------------------
A round is detected iff exactly one of the ``d`` outcome bins registers a
click: either the photon arrives (probability ``(d/L) * eta``) and no other
bin dark-fires, or the photon is lost and exactly one bin dark-fires.  A
detected photon's outcome is replaced by a uniformly random wrong outcome with
probability ``e_mis``.  Dark-count detections carry no photon information:
they are recorded with ``m_measured = None`` and every sifted one counts as an
error, matching the closed-form error accounting in
:mod:`hdrrdps.channel`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, Iterator

import numpy as np
from scipy.stats import norm

from .attack import SubsetIndex
from .bounds import ProtocolParams
from .channel import NoiseModel, transmission
from .core import DomainError

__all__ = [
    "Packet",
    "RoundOutcome",
    "SimStats",
    "ROUND_DUMP_HEADER",
    "choose_subset",
    "iter_rounds",
    "mub_probabilities",
    "prepare_packet",
    "run",
    "sift_check",
    "wilson_interval",
]

ROUND_DUMP_HEADER = "round,detected,dark,J,m_expected,m_measured,sifted,erroneous"

_CHUNK_ROUNDS = 1 << 16
_U64_TO_UNIT = 2.0 ** -53


@dataclass(frozen=True)
class Packet:
    """Sender's phase indices, one per mode; physical phase is ``2 pi k_j / d``."""

    phases: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(int(k) for k in self.phases))
        if len(self.phases) == 0:
            raise DomainError("packet must contain at least one mode")
        if any(k < 0 for k in self.phases):
            raise DomainError("phase indices must be non-negative")

    @property
    def L(self) -> int:
        return len(self.phases)


@dataclass(frozen=True)
class RoundOutcome:
    """Everything recorded about a single simulated round.

    ``m_measured`` is ``None`` unless a photon was detected; dark-count
    detections are flagged by ``dark_triggered`` and, when sifted, always
    count as erroneous.
    """

    detected: bool
    dark_triggered: bool
    J: SubsetIndex
    m_measured: int | None
    m_expected: int | None
    sifted: bool
    erroneous: bool

    def __post_init__(self):
        if self.sifted and not (self.detected and self.m_expected is not None):
            raise DomainError("sifted round must be detected with a defined key value")
        if self.erroneous and not (self.sifted and self.m_measured != self.m_expected):
            raise DomainError("erroneous round must be sifted with a wrong measured value")
        if self.dark_triggered and not self.detected:
            raise DomainError("dark_triggered applies to detected rounds only")


@dataclass(frozen=True)
class SimStats:
    """Tallies of a simulation run.

    ``sift_rate`` is sifted/detected, ``qber`` is errors/sifted, and
    ``wilson_ci`` is the 95% Wilson score interval on the QBER.
    """

    rounds: int
    detected: int
    sifted: int
    errors: int
    sift_rate: float
    qber: float
    wilson_ci: tuple[float, float]

    CSV_HEADER = "rounds,detected,sifted,errors,sift_rate,qber,qber_ci_low,qber_ci_high"

    @classmethod
    def from_counts(cls, rounds: int, detected: int, sifted: int, errors: int) -> "SimStats":
        if not 0 <= errors <= sifted <= detected <= rounds:
            raise DomainError(
                f"invalid tallies: errors={errors} sifted={sifted} "
                f"detected={detected} rounds={rounds}"
            )
        return cls(
            rounds=rounds,
            detected=detected,
            sifted=sifted,
            errors=errors,
            sift_rate=sifted / detected if detected else 0.0,
            qber=errors / sifted if sifted else 0.0,
            wilson_ci=wilson_interval(errors, sifted, 0.95),
        )

    def csv_row(self) -> str:
        return ",".join(
            [str(self.rounds), str(self.detected), str(self.sifted), str(self.errors)]
            + [f"{v:.12g}" for v in (self.sift_rate, self.qber, *self.wilson_ci)]
        )


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Returns ``(0.0, 1.0)`` when there are no trials.
    """
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")
    if trials < 0 or not 0 <= successes <= max(trials, 0):
        raise DomainError(f"invalid counts: {successes}/{trials}")
    if trials == 0:
        return (0.0, 1.0)
    z = float(norm.ppf(0.5 + confidence / 2.0))
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def prepare_packet(params: ProtocolParams, rng: np.random.Generator) -> Packet:
    """Draw a packet with independent uniform phase indices in ``[0, d)``."""
    return Packet(tuple(int(k) for k in rng.integers(0, params.d, size=params.L)))


def choose_subset(params: ProtocolParams, rng: np.random.Generator) -> SubsetIndex:
    """Draw a uniform ``d``-subset of modes ``1..L``.

    The subset is the set of positions of the ``d`` smallest of ``L`` iid
    uniform keys, which is uniform over all strictly increasing d-tuples.
    """
    keys = rng.random(params.L)
    order = np.argsort(keys, kind="stable")
    picked = np.sort(order[: params.d])
    return SubsetIndex(tuple(int(i) + 1 for i in picked))


def mub_probabilities(packet: Packet, subset: SubsetIndex, d: int) -> np.ndarray:
    """Outcome distribution of the Fourier-basis measurement on the chosen subset.

    For the restricted, renormalized state with phases ``k_{j_n}`` the
    probability of outcome ``m`` is ``|sum_n exp(i 2 pi (k_{j_n} - m n) / d)|^2
    / d^2``; the probabilities sum to one by Parseval's identity.
    """
    if len(subset) != d:
        raise DomainError(f"subset size {len(subset)} does not match d={d}")
    if subset.indices[-1] > packet.L:
        raise DomainError(f"subset {subset.indices} exceeds packet size L={packet.L}")
    k = np.asarray([packet.phases[j - 1] for j in subset.indices], dtype=np.int64)
    if np.any(k >= d):
        raise DomainError(f"phase indices must lie in [0, {d - 1}]")
    n = np.arange(d)
    amplitudes = np.exp(2j * np.pi * (k[None, :] - np.outer(n, n)) / d).sum(axis=1)
    return np.abs(amplitudes) ** 2 / (d * d)


def sift_check(packet: Packet, subset: SubsetIndex, d: int) -> int | None:
    """Key value ``m`` if the subset phases form a Fourier-basis element, else ``None``.

    The condition ``k_{j_n} = (c + m n) mod d`` for some ``c, m`` holds iff the
    consecutive phase differences are all equal mod ``d``; the common
    difference is the key value.
    """
    if len(subset) != d:
        raise DomainError(f"subset size {len(subset)} does not match d={d}")
    if subset.indices[-1] > packet.L:
        raise DomainError(f"subset {subset.indices} exceeds packet size L={packet.L}")
    k = [packet.phases[j - 1] for j in subset.indices]
    if any(x >= d for x in k):
        raise DomainError(f"phase indices must lie in [0, {d - 1}]")
    m = (k[1] - k[0]) % d
    for a, b in zip(k, k[1:]):
        if (b - a) % d != m:
            return None
    return m


def _round_block_words(L: int, d: int) -> int:
    # Per-round raw words: L phases, L subset keys, survival, outcome, flip,
    # flip target, d dark counts; padded to whole 4-word Philox counter blocks.
    needed = 2 * L + d + 4
    return ((needed + 3) // 4) * 4


def _simulate_chunks(
    params: ProtocolParams, noise: NoiseModel, rounds: int, seed: int
) -> Iterator[dict]:
    L, d = params.L, params.d
    eta = transmission(noise.loss_db)
    p_survive = (d / L) * eta
    block = _round_block_words(L, d)
    bitgen = np.random.Philox(key=seed)
    done = 0
    fourier = np.exp(-2j * np.pi * np.outer(np.arange(d), np.arange(d)) / d)
    while done < rounds:
        n = min(_CHUNK_ROUNDS, rounds - done)
        raw = bitgen.random_raw(n * block).reshape(n, block)
        u = (raw >> 11).astype(np.float64) * _U64_TO_UNIT
        phases = np.floor(u[:, :L] * d).astype(np.int64)
        keys = u[:, L : 2 * L]
        u_survive = u[:, 2 * L]
        u_outcome = u[:, 2 * L + 1]
        u_flip = u[:, 2 * L + 2]
        u_target = u[:, 2 * L + 3]
        u_dark = u[:, 2 * L + 4 : 2 * L + 4 + d]

        subset0 = np.sort(np.argsort(keys, axis=1, kind="stable")[:, :d], axis=1)
        ksub = np.take_along_axis(phases, subset0, axis=1)
        diffs = np.mod(ksub[:, 1:] - ksub[:, :-1], d)
        sift_ok = np.all(diffs == diffs[:, :1], axis=1)
        m_expected = diffs[:, 0]

        # Fourier-outcome distribution per round, accumulated with fixed
        # element-wise order (no BLAS) so results are thread-count independent.
        z = np.exp(2j * np.pi * ksub / d)
        probs = np.empty((n, d))
        for m in range(d):
            acc = np.zeros(n, dtype=np.complex128)
            for pos in range(d):
                acc = acc + z[:, pos] * fourier[pos, m]
            probs[:, m] = (acc.real * acc.real + acc.imag * acc.imag) / (d * d)
        cums = np.cumsum(probs, axis=1)
        outcome = np.minimum((u_outcome[:, None] >= cums).sum(axis=1), d - 1)
        flip = u_flip < noise.e_mis
        wrong = (outcome + 1 + np.floor(u_target * (d - 1)).astype(np.int64)) % d
        outcome = np.where(flip, wrong, outcome)

        survive = u_survive < p_survive
        dark = u_dark < noise.p_d
        n_dark = dark.sum(axis=1)
        dark_at_outcome = np.take_along_axis(dark, outcome[:, None], axis=1)[:, 0]
        detected_photon = survive & (n_dark - dark_at_outcome == 0)
        detected_dark = ~survive & (n_dark == 1)
        detected = detected_photon | detected_dark
        sifted = detected & sift_ok
        erroneous = sifted & (detected_dark | (detected_photon & (outcome != m_expected)))

        yield {
            "start": done,
            "n": n,
            "subset0": subset0,
            "m_expected": m_expected,
            "sift_ok": sift_ok,
            "outcome": outcome,
            "detected_photon": detected_photon,
            "detected_dark": detected_dark,
            "detected": detected,
            "sifted": sifted,
            "erroneous": erroneous,
        }
        done += n


def run(
    params: ProtocolParams,
    noise: NoiseModel,
    rounds: int,
    seed: int,
    dump: IO[str] | None = None,
) -> SimStats:
    """Simulate ``rounds`` protocol rounds and tally the results.

    Deterministic for fixed ``(params, noise, rounds, seed)``.  When ``dump``
    is given, one CSV row per round (header :data:`ROUND_DUMP_HEADER`) is
    streamed to it; the subset is dumped as semicolon-joined 1-based indices.
    """
    if rounds < 1:
        raise DomainError(f"rounds must be >= 1, got {rounds}")
    if dump is not None:
        dump.write(ROUND_DUMP_HEADER + "\n")
    detected = sifted = errors = 0
    for chunk in _simulate_chunks(params, noise, rounds, seed):
        detected += int(chunk["detected"].sum())
        sifted += int(chunk["sifted"].sum())
        errors += int(chunk["erroneous"].sum())
        if dump is not None:
            _dump_chunk(dump, chunk)
    return SimStats.from_counts(rounds, detected, sifted, errors)


def iter_rounds(
    params: ProtocolParams, noise: NoiseModel, rounds: int, seed: int
) -> Iterator[RoundOutcome]:
    """Yield per-round outcomes for the same stream :func:`run` tallies."""
    for chunk in _simulate_chunks(params, noise, rounds, seed):
        for i in range(chunk["n"]):
            det = bool(chunk["detected"][i])
            photon = bool(chunk["detected_photon"][i])
            sif = bool(chunk["sifted"][i])
            yield RoundOutcome(
                detected=det,
                dark_triggered=bool(chunk["detected_dark"][i]),
                J=SubsetIndex(tuple(int(j) + 1 for j in chunk["subset0"][i])),
                m_measured=int(chunk["outcome"][i]) if photon else None,
                m_expected=int(chunk["m_expected"][i]) if chunk["sift_ok"][i] else None,
                sifted=sif,
                erroneous=bool(chunk["erroneous"][i]),
            )


def _dump_chunk(dump: IO[str], chunk: dict) -> None:
    start = chunk["start"]
    for i in range(chunk["n"]):
        photon = bool(chunk["detected_photon"][i])
        sift_ok = bool(chunk["sift_ok"][i])
        row = (
            f"{start + i},"
            f"{_csv_bool(bool(chunk['detected'][i]))},"
            f"{_csv_bool(bool(chunk['detected_dark'][i]))},"
            f"{';'.join(str(int(j) + 1) for j in chunk['subset0'][i])},"
            f"{int(chunk['m_expected'][i]) if sift_ok else ''},"
            f"{int(chunk['outcome'][i]) if photon else ''},"
            f"{_csv_bool(bool(chunk['sifted'][i]))},"
            f"{_csv_bool(bool(chunk['erroneous'][i]))}"
        )
        dump.write(row + "\n")


def _csv_bool(value: bool) -> str:
    return "true" if value else "false"
