"""Air-to-ground channel: LoS probability, path loss, bandwidth, rate, delay.

All functions are pure.  Powers are configured in dBm and converted to a
linear milliwatt scale before the Shannon rate is evaluated.  Links that
involve a ground endpoint (SD->UAV, UAV->BS) blend LoS and NLoS excess
loss through the elevation-angle sigmoid; UAV->UAV links see free space
only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass
class ChannelParams:
    carrier_frequency: float = 2.4e9   # Hz
    light_speed: float = 3.0e8         # m/s
    rho1: float = 5.0188
    rho2: float = 0.3511
    eta_los: float = 0.1               # dB
    eta_nlos: float = 21.0             # dB
    tx_power_dbm: float = 40.0
    noise_power_dbm: float = -110.0
    total_bandwidth: float = 2.4e6     # Hz

    def __post_init__(self):
        if self.rho1 <= 0 or self.rho2 <= 0:
            raise ValueError("rho1 and rho2 must be positive")
        if not 0 <= self.eta_los <= self.eta_nlos:
            raise ValueError("need 0 <= eta_los <= eta_nlos")
        if self.total_bandwidth <= 0:
            raise ValueError("bandwidth must be positive")


@dataclass
class LinkBudget:
    distance: float
    omega: int
    path_loss: float  # dB
    rate: float       # bit/s


def dbm_to_mw(p_dbm: float) -> float:
    return 10.0 ** (p_dbm / 10.0)


def los_probability(delta_h: float, horizontal_dist: float, params: ChannelParams) -> float:
    """Probability of a line-of-sight link given the link geometry.

    ``delta_h`` is the altitude difference and ``horizontal_dist`` the
    ground-projected distance, both in meters.  A zero horizontal
    distance is the straight-overhead case (elevation 90 degrees).
    """
    if horizontal_dist < 0:
        raise ValueError("horizontal distance must be non-negative")
    if horizontal_dist == 0.0 and delta_h == 0.0:
        raise ValueError("degenerate geometry: both distances zero")
    if horizontal_dist == 0.0:
        angle_deg = 90.0
    else:
        angle_deg = math.degrees(math.atan(delta_h / horizontal_dist))
    return 1.0 / (1.0 + params.rho1 * math.exp(-params.rho2 * (angle_deg - params.rho1)))


def path_loss(distance: float, omega: int, delta_h: float, horizontal_dist: float,
              params: ChannelParams) -> float:
    """Link path loss in dB.

    Free-space term plus, for ground-involved links (omega = 1), the
    LoS-probability-weighted excess loss.
    """
    if distance <= 0:
        raise ValueError("distance must be positive")
    fspl = 20.0 * math.log10(4.0 * math.pi * params.carrier_frequency * distance / params.light_speed)
    if omega == 0:
        return fspl
    pr = los_probability(delta_h, horizontal_dist, params)
    return fspl + pr * (params.eta_los - params.eta_nlos) + params.eta_nlos


def allocate_bandwidth(queued_sizes_bits, total_hz: float) -> list[float]:
    """Split a node's bandwidth across queued demands proportionally to size.

    The proportional split equalizes per-demand transmission delays on a
    link, which is the point of the scheme.  Shares sum to the total.
    """
    sizes = list(queued_sizes_bits)
    if not sizes:
        return []
    if any(s <= 0 for s in sizes):
        raise ValueError("demand sizes must be positive")
    if total_hz <= 0:
        raise ValueError("total bandwidth must be positive")
    total_size = math.fsum(sizes)
    return [s * total_hz / total_size for s in sizes]


def transmission_rate(bandwidth_hz: float, path_loss_db: float, params: ChannelParams) -> float:
    """Shannon rate in bit/s for the given allocation and path loss."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    p_rx_mw = dbm_to_mw(params.tx_power_dbm) * 10.0 ** (-path_loss_db / 10.0)
    snr = p_rx_mw / dbm_to_mw(params.noise_power_dbm)
    return bandwidth_hz * math.log2(1.0 + snr)


def hop_delay(demands: list[tuple[float, float]]) -> tuple[list[float], float]:
    """Per-demand transmission delays and the slot-level (max) delay.

    ``demands`` holds (size_bits, rate_bit_per_s) pairs for one link.  A
    zero rate marks an unusable link; the caller treats the demand as
    failed, so the delay reported for it is infinite rather than an
    error.
    """
    per_demand = []
    for size, rate in demands:
        if rate < 0:
            raise ValueError("negative rate")
        per_demand.append(size / rate if rate > 0 else math.inf)
    slot_max = max(per_demand, default=0.0)
    return per_demand, slot_max
