"""Per-UAV credit values: evidence counters, adaptive weights, detection.

A UAV's credit in [0, 1] is updated each slot from three direct factors
(demand forwarding ratio, trusted-interaction degree, probe reception
rate) and one indirect factor (recommendations aggregated from trusted
neighbors).  The update is a convex combination whose weights either
adapt to the evidence (more weight on whichever factor looks worse),
stay fixed at an even split, or are drawn at random; the last two serve
as benchmarks.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

CREDIT_FLOOR = 0.01
HISTORY_WEIGHT_CAP = 0.9


@dataclass
class BehaviorProfile:
    """Per-event probabilities of behaving well; honest UAVs are all ones."""

    p_forward: float = 1.0
    p_trusted_interact: float = 1.0
    p_probe_ack: float = 1.0
    is_malicious: bool = False

    def __post_init__(self):
        for p in (self.p_forward, self.p_trusted_interact, self.p_probe_ack):
            if not 0.0 <= p <= 1.0:
                raise ValueError("behavior probabilities must lie in [0, 1]")


@dataclass
class TrustRecord:
    """Evidence counters and the current credit value for one UAV.

    Forwarding and interaction counters accumulate over the whole run;
    probe receptions are kept over a sliding window.  ``recommendations``
    maps a neighbor id to its [positive, negative] opinion counts about
    this UAV.
    """

    credit: float = 1.0
    rx_total: int = 0
    tx_total: int = 0
    interactions_total: int = 0
    interactions_trusted: int = 0
    probe_window: int = 10       # slots of probe history kept
    probe_period: float = 1.0    # slots between probes; <1 means several per slot
    slots_observed: int = 0
    recent_probes: deque = field(default_factory=lambda: deque(maxlen=10))
    recommendations: dict[int, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        if self.probe_window <= 0 or self.probe_period <= 0:
            raise ValueError("probe window and period must be positive")
        self.recent_probes = deque(self.recent_probes, maxlen=self.probe_window)

    @property
    def probes_received(self) -> int:
        return sum(self.recent_probes)

    @property
    def probes_per_slot(self) -> int:
        return max(1, round(1.0 / self.probe_period))

    def record_probe_round(self, received: int) -> None:
        """Close one slot of probing: how many probes actually arrived."""
        self.recent_probes.append(received)
        self.slots_observed += 1

    def add_recommendation(self, neighbor: int, positive: bool) -> None:
        entry = self.recommendations.setdefault(neighbor, [0, 0])
        entry[0 if positive else 1] += 1


class WeightKind(Enum):
    ADAPTIVE = "adaptive"
    AVERAGE = "average"
    RANDOM = "random"


@dataclass
class WeightScheme:
    kind: WeightKind = WeightKind.ADAPTIVE
    beta: float = 0.5
    trust_threshold: float = 0.8
    direct_weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise ValueError("beta must lie in (0, 1]")
        if abs(sum(self.direct_weights) - 1.0) > 1e-12:
            raise ValueError("direct factor weights must sum to 1")


def direct_trust(record: TrustRecord, weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)) -> float:
    """Weighted combination of the three direct evidence factors.

    Factors with no evidence yet fall back to the current credit, so a
    fresh UAV keeps its initial value.  The probe factor compares
    receptions against the number of probing periods actually elapsed
    (capped at the window), otherwise every young UAV would look lossy.
    """
    if record.rx_total > 0:
        d1 = record.tx_total / record.rx_total
    else:
        d1 = record.credit
    if record.interactions_total > 0:
        d2 = record.interactions_trusted / record.interactions_total
    else:
        d2 = record.credit
    expected = min(record.slots_observed, record.probe_window) / record.probe_period
    if expected > 0:
        d3 = min(1.0, record.probes_received / expected)
    else:
        d3 = record.credit  # no probing period has elapsed yet
    w1, w2, w3 = weights
    return w1 * d1 + w2 * d2 + w3 * d3


def indirect_trust(record: TrustRecord, neighbor_credits: dict[int, float], threshold: float) -> float:
    """Mean recommendation ratio over trusted neighbors with evidence.

    Falls back to the neutral prior 0.5 when no trusted neighbor has
    reported anything yet.
    """
    ratios = []
    for neighbor, (pos, neg) in record.recommendations.items():
        if neighbor_credits.get(neighbor, 0.0) < threshold:
            continue
        if pos + neg == 0:
            continue
        ratios.append(pos / (pos + neg))
    if not ratios:
        return 0.5
    return sum(ratios) / len(ratios)


def compute_weights(
    scheme: WeightScheme,
    credit: float,
    t_direct: float,
    t_indirect: float,
    rng: np.random.Generator | None = None,
) -> tuple[float, float, float]:
    """History/direct/indirect weights for the credit update.

    The history weight grows as the credit shrinks (sluggish recovery
    for suspects) and is capped so the update never freezes.  The
    adaptive scheme splits the remainder proportionally to how bad each
    evidence source looks; the average scheme splits it evenly; the
    random scheme draws the direct share uniformly from the middle of
    the remainder.  The three weights always sum to one.
    """
    credit = max(credit, CREDIT_FLOOR)
    w0 = min(HISTORY_WEIGHT_CAP, scheme.beta * scheme.trust_threshold / credit)
    rest = 1.0 - w0
    if scheme.kind is WeightKind.ADAPTIVE:
        u1 = 1.0 - t_direct
        u2 = 1.0 - t_indirect
        if u1 + u2 <= 0.0:
            w1 = rest / 2.0
        else:
            w1 = rest * u1 / (u1 + u2)
    elif scheme.kind is WeightKind.AVERAGE:
        w1 = rest / 2.0
    elif scheme.kind is WeightKind.RANDOM:
        if rng is None:
            raise ValueError("random scheme needs a random stream")
        w1 = rng.uniform(0.2 * rest, 0.8 * rest)
    else:  # pragma: no cover
        raise ValueError(f"unknown scheme {scheme.kind}")
    w2 = 1.0 - w0 - w1
    return w0, w1, w2


def update_credit(credit: float, weights: tuple[float, float, float],
                  t_direct: float, t_indirect: float) -> float:
    """One step of the credit recursion, clamped into [0.01, 1]."""
    w0, w1, w2 = weights
    value = w0 * credit + w1 * t_direct + w2 * t_indirect
    return min(1.0, max(CREDIT_FLOOR, value))


def classify(credit: float, threshold: float) -> bool:
    """True when the UAV counts as trusted; the boundary is malicious."""
    return credit > threshold


def detection_time(credit_history, threshold: float) -> int | None:
    """First 1-based slot where the credit drops below the threshold."""
    for t, value in enumerate(credit_history, start=1):
        if value < threshold:
            return t
    return None


def network_detection_time(histories: dict[int, list[float]], malicious_ids,
                           threshold: float) -> int | None:
    """Slots until every truly-malicious UAV has been flagged at least once."""
    worst = 0
    for uid in malicious_ids:
        t = detection_time(histories[uid], threshold)
        if t is None:
            return None
        worst = max(worst, t)
    return worst
