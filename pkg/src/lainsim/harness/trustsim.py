"""Standalone trust-evaluation scenario: how fast are bad UAVs flagged.

A compact fleet flies a random walk while a synthetic evidence process
drives the credit model: each slot a UAV may receive-and-forward a
demand (dropped with its profile probability), may interact with a
peer (trusted-type or not), and answers one probe round.  Neighbors
record what they observe, both forwarding outcomes and probe acks, as
positive or negative recommendations.  Every scheme sees the identical
evidence stream for a given seed, so detection-time comparisons are
paired.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..topology import TopologyConfig, build_topology
from ..trust import (BehaviorProfile, TrustRecord, WeightKind, WeightScheme,
                     compute_weights, direct_trust, indirect_trust,
                     network_detection_time, update_credit)


@dataclass
class TrustScenarioConfig:
    n_uavs: int = 12
    n_malicious: int = 2
    profile: tuple[float, float, float] = (0.6, 0.6, 0.6)
    trust_threshold: float = 0.8
    beta: float = 0.5
    horizon: int = 300
    demand_rate: float = 0.5       # per-slot probability of a forwarding event
    interaction_rate: float = 0.5  # per-slot probability of an interaction
    probe_window: int = 10
    probe_period: float = 0.5      # two probes per slot smooth the ack signal
    # Fresh UAVs get the benefit of the doubt: the probe window starts
    # full of acks and each observer starts with this many positive
    # pseudo-observations, so evidence erodes credit gradually instead
    # of cliff-dropping on the first missed probe.
    optimism_prior: int = 24
    topology: TopologyConfig = field(default_factory=lambda: TopologyConfig(
        area=(2000.0, 2000.0), altitude_band=(200.0, 400.0),
        d_max=4000.0, n_sd=0, n_uav=12, n_bs=0))


def _draw_events(cfg: TrustScenarioConfig, behaviors: dict[int, BehaviorProfile],
                 rng: np.random.Generator, horizon: int) -> dict[int, dict[str, np.ndarray]]:
    """Pre-draw the full evidence stream so every scheme replays it."""
    events = {}
    probes = max(1, round(1.0 / cfg.probe_period))
    for uid in sorted(behaviors):
        b = behaviors[uid]
        events[uid] = {
            "has_demand": rng.random(horizon) < cfg.demand_rate,
            "forwards": rng.random(horizon) < b.p_forward,
            "has_interaction": rng.random(horizon) < cfg.interaction_rate,
            "trusted_interaction": rng.random(horizon) < b.p_trusted_interact,
            "probe_acks": rng.binomial(probes, b.p_probe_ack, size=horizon),
        }
    return events


def run_trust_trial(cfg: TrustScenarioConfig, scheme_kind: WeightKind,
                    seed_seq: np.random.SeedSequence):
    """One seeded run of one scheme; returns per-UAV credit histories.

    The seed sequence children are consumed in a fixed order (topology,
    events, scheme weights), so different schemes under the same seed
    share the fleet and the entire evidence stream.
    """
    topo_seed, event_seed, scheme_seed = seed_seq.spawn(3)
    topo = build_topology(replace(cfg.topology, n_uav=cfg.n_uavs),
                          np.random.default_rng(topo_seed))
    uavs = topo.uav_ids
    malicious = set(uavs[:cfg.n_malicious])
    p1, p2, p3 = cfg.profile
    behaviors = {
        uid: (BehaviorProfile(p1, p2, p3, True) if uid in malicious else BehaviorProfile())
        for uid in uavs
    }
    events = _draw_events(cfg, behaviors, np.random.default_rng(event_seed), cfg.horizon)
    rng_scheme = np.random.default_rng(scheme_seed)
    scheme = WeightScheme(kind=scheme_kind, beta=cfg.beta,
                          trust_threshold=cfg.trust_threshold)

    records = {}
    for uid in uavs:
        rec = TrustRecord(probe_window=cfg.probe_window, probe_period=cfg.probe_period)
        for _ in range(cfg.probe_window):
            rec.record_probe_round(rec.probes_per_slot)
        for other in uavs:
            if other != uid:
                rec.recommendations[other] = [cfg.optimism_prior, 0]
        records[uid] = rec
    histories: dict[int, list[float]] = {uid: [] for uid in uavs}
    mobility_rng = np.random.default_rng(topo_seed.spawn(1)[0])

    for t in range(cfg.horizon):
        neighbor_cache = {uid: topo.neighbors(uid) for uid in uavs}
        for uid in uavs:
            rec = records[uid]
            ev = events[uid]
            observers = neighbor_cache[uid]
            if ev["has_demand"][t]:
                rec.rx_total += 1
                forwarded = bool(ev["forwards"][t])
                rec.tx_total += int(forwarded)
                for k in observers:
                    rec.add_recommendation(k, positive=forwarded)
            if ev["has_interaction"][t]:
                rec.interactions_total += 1
                rec.interactions_trusted += int(ev["trusted_interaction"][t])
            acks = int(ev["probe_acks"][t])
            misses = rec.probes_per_slot - acks
            rec.record_probe_round(acks)
            for k in observers:
                entry = rec.recommendations.setdefault(k, [0, 0])
                entry[0] += acks
                entry[1] += misses

        credits_before = {uid: records[uid].credit for uid in uavs}
        for uid in uavs:
            rec = records[uid]
            t_d = direct_trust(rec)
            t_i = indirect_trust(rec, credits_before, cfg.trust_threshold)
            weights = compute_weights(scheme, rec.credit, t_d, t_i, rng_scheme)
            rec.credit = update_credit(rec.credit, weights, t_d, t_i)
            histories[uid].append(rec.credit)

        if all(min(histories[uid]) < cfg.trust_threshold for uid in malicious):
            break
        topo.step(mobility_rng)

    return histories, malicious


def trial_detection_slots(cfg: TrustScenarioConfig, scheme_kind: WeightKind,
                          seed_seq: np.random.SeedSequence) -> int | None:
    histories, malicious = run_trust_trial(cfg, scheme_kind, seed_seq)
    return network_detection_time(histories, malicious, cfg.trust_threshold)
