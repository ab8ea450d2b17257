"""Closed-form detector/channel arithmetic and key-rate-versus-loss curves.

The detector model uses ``d`` gated single-photon detectors with dark-count
probability ``p_d`` per gate and a mode-mismatch probability ``e_mis`` that a
correctly transmitted photon registers in the wrong outcome bin.  A packet is
accepted when exactly one bin clicks, giving the per-packet yield

    ``Y = (1 - p_d)**(d-1) * ((d/L) eta + (1 - (d/L) eta) d p_d)``

and the error weight

    ``E Y = (1 - p_d)**(d-1) * ((d/L) eta e_mis + (1 - (d/L) eta) d p_d)``,

where every dark-count acceptance counts as an error.  These match the
conventions of :func:`hdrrdps.simulation.run` exactly, so Monte Carlo tallies
converge to these expressions.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .bounds import ProtocolParams, error_cap, rate_monitor, rate_no_monitor
from .core import DomainError, sift_probability

__all__ = [
    "EmisTable",
    "EmisTableError",
    "NoiseModel",
    "RatePoint",
    "detection_yield",
    "load_emis_table",
    "qber",
    "rate_curve",
    "transmission",
]


class EmisTableError(ValueError):
    """A mode-mismatch table is malformed or lacks a requested entry."""


@dataclass(frozen=True)
class NoiseModel:
    """Channel loss in dB, dark-count probability per gate, and mode mismatch."""

    loss_db: float
    p_d: float
    e_mis: float

    def __post_init__(self):
        if self.loss_db < 0.0:
            raise DomainError(f"loss_db must be >= 0, got {self.loss_db}")
        if not 0.0 <= self.p_d < 1.0:
            raise DomainError(f"p_d must lie in [0, 1), got {self.p_d}")
        if not 0.0 <= self.e_mis < 1.0:
            raise DomainError(f"e_mis must lie in [0, 1), got {self.e_mis}")


@dataclass(frozen=True)
class RatePoint:
    """One point of a key-rate-versus-loss curve.

    ``rate_per_sifted`` is the key rate in secret bits per sifted detection,
    clamped at zero for reporting; ``rate_per_packet`` multiplies it by the
    sifting probability and the yield.  ``domain_overrun`` flags loss values
    whose error rate exceeds the rate function's domain (rate reported as 0).
    """

    loss_db: float
    eta: float
    Y: float
    E: float
    rate_per_sifted: float
    rate_per_packet: float
    monitored: bool
    domain_overrun: bool

    CSV_HEADER = "loss_db,eta,Y,E,rate_per_sifted,rate_per_packet,monitored,domain_overrun"

    def csv_row(self) -> str:
        nums = (self.loss_db, self.eta, self.Y, self.E, self.rate_per_sifted, self.rate_per_packet)
        flags = ("true" if self.monitored else "false", "true" if self.domain_overrun else "false")
        return ",".join([f"{v:.12g}" for v in nums] + list(flags))


def transmission(loss_db: float) -> float:
    """Channel transmission ``eta = 10**(-loss_db / 10)``."""
    if loss_db < 0.0:
        raise DomainError(f"loss_db must be >= 0, got {loss_db}")
    return 10.0 ** (-loss_db / 10.0)


def detection_yield(params: ProtocolParams, noise: NoiseModel) -> float:
    """Probability that a transmitted packet produces an accepted detection."""
    eta = transmission(noise.loss_db)
    capture = (params.d / params.L) * eta
    return (1.0 - noise.p_d) ** (params.d - 1) * (
        capture + (1.0 - capture) * params.d * noise.p_d
    )


def qber(params: ProtocolParams, noise: NoiseModel) -> float:
    """Error rate among accepted detections (all dark-count acceptances count)."""
    y = detection_yield(params, noise)
    if y <= 0.0:
        raise DomainError("detection yield is zero; the error rate is undefined")
    eta = transmission(noise.loss_db)
    capture = (params.d / params.L) * eta
    ey = (1.0 - noise.p_d) ** (params.d - 1) * (
        capture * noise.e_mis + (1.0 - capture) * params.d * noise.p_d
    )
    return ey / y


def rate_curve(
    params: ProtocolParams,
    noise_base: NoiseModel,
    loss_grid,
    monitored: bool,
) -> list[RatePoint]:
    """Evaluate the key rate along a sorted ascending grid of loss values.

    Error rates beyond the rate function's domain are reported as zero-rate
    points with ``domain_overrun=True`` so curves extend over the whole grid.
    """
    grid = [float(x) for x in loss_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("loss grid must be sorted ascending")
    e_domain = error_cap(params) if monitored else (params.d - 1) / params.d
    keep = sift_probability(params.d)
    points = []
    for loss in grid:
        noise = dataclasses.replace(noise_base, loss_db=loss)
        eta = transmission(loss)
        y = detection_yield(params, noise)
        e = qber(params, noise)
        if e > e_domain:
            clamped = 0.0
            overrun = True
        else:
            if monitored:
                raw = rate_monitor(params, e).rate_bits
            else:
                raw = rate_no_monitor(params, e).rate_bits
            clamped = max(0.0, raw)
            overrun = False
        points.append(
            RatePoint(
                loss_db=loss,
                eta=eta,
                Y=y,
                E=e,
                rate_per_sifted=clamped,
                rate_per_packet=keep * y * clamped,
                monitored=monitored,
                domain_overrun=overrun,
            )
        )
    return points


@dataclass(frozen=True)
class EmisTable:
    """Measured mode mismatch per protocol parameter pair ``(L, d)``."""

    rows: dict[tuple[int, int], float]

    def lookup(self, L: int, d: int) -> float:
        try:
            return self.rows[(L, d)]
        except KeyError:
            raise EmisTableError(f"no mode-mismatch entry for (L={L}, d={d})") from None


def load_emis_table(path) -> EmisTable:
    """Parse a mode-mismatch CSV: header ``L,d,e_mis``, ``#`` comments allowed.

    Raises
    ------
    EmisTableError
        Naming the offending line for malformed rows, duplicate keys or
        out-of-range values.
    """
    rows: dict[tuple[int, int], float] = {}
    header_seen = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if not header_seen:
                if text != "L,d,e_mis":
                    raise EmisTableError(
                        f"{path}:{lineno}: expected header 'L,d,e_mis', got {text!r}"
                    )
                header_seen = True
                continue
            parts = text.split(",")
            if len(parts) != 3:
                raise EmisTableError(f"{path}:{lineno}: expected 3 fields, got {len(parts)}")
            try:
                L = int(parts[0])
                d = int(parts[1])
                value = float(parts[2])
            except ValueError as exc:
                raise EmisTableError(f"{path}:{lineno}: {exc}") from None
            if not 2 <= d < L:
                raise EmisTableError(f"{path}:{lineno}: requires 2 <= d < L, got L={L}, d={d}")
            if not 0.0 <= value < 1.0:
                raise EmisTableError(f"{path}:{lineno}: e_mis must lie in [0, 1), got {value}")
            if (L, d) in rows:
                raise EmisTableError(f"{path}:{lineno}: duplicate entry for (L={L}, d={d})")
            rows[(L, d)] = value
    if not header_seen:
        raise EmisTableError(f"{path}: empty table (missing 'L,d,e_mis' header)")
    return EmisTable(rows)
