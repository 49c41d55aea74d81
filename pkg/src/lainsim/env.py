"""Discrete-time routing environment over the zero-trust UAV network.

Each slot: demands queued on SDs upload to collector UAVs, every UAV
forwards its queued demands to the next hop chosen by its agent,
bandwidth is split per node proportionally to demand sizes, hop delays
accrue, malicious holders drop demands they just received, trust
evidence and credits update, and one consensus round commits credit
records and revokes UAVs whose on-chain credit fell to the threshold.
Revoked UAVs disappear from every neighbor set the following slot and
any demand stranded on them is dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channel import ChannelParams, allocate_bandwidth, path_loss, transmission_rate
from .ledger import (Blockchain, Candidate, ConsensusParams, LedgerRecord,
                     RecordKind, RoleAssignment, select_chus)
from .topology import (NodeKind, Topology, TopologyConfig, UavClass,
                       build_topology, euclidean_distance)
from .trust import (BehaviorProfile, TrustRecord, WeightScheme, compute_weights,
                    direct_trust, indirect_trust, update_credit)


class DemandStatus(Enum):
    IN_FLIGHT = "in_flight"
    DELIVERED = "delivered"
    FAILED = "failed"


class FailureCause(Enum):
    DEADLINE = "deadline"
    SLOT_OVERRUN = "slot_overrun"
    CONSENSUS_OVERRUN = "consensus_overrun"
    DROP = "drop"
    NOT_ARRIVED = "not_arrived"
    QUEUE_FULL = "queue_full"


@dataclass
class Demand:
    id: int
    source: int
    destination: int
    size_bits: float
    deadline_s: float
    accumulated_delay_s: float = 0.0
    location: int = -1
    status: DemandStatus = DemandStatus.IN_FLIGHT
    cause: FailureCause | None = None
    path: list[tuple[int, int]] = field(default_factory=list)
    earned_reward: float = 0.0  # hop rewards along the path so far


@dataclass
class EnvConfig:
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    channel: ChannelParams = field(default_factory=ChannelParams)
    scheme: WeightScheme = field(default_factory=WeightScheme)
    n_demands: int = 25
    demand_size_bits: tuple[float, float] = (400e3, 600e3)
    deadline_slots: int = 10
    queue_capacity: int = 10
    k_max: int = 6
    iota: float = 10.0
    varsigma: float = 0.2
    steps_per_episode: int = 12
    n_malicious: int = 2
    malicious_profile: tuple[float, float, float] = (0.6, 0.8, 0.8)
    probe_window: int = 10
    probe_period: int = 1
    # ledger knobs
    stability_period: int = 3
    compute_threshold: float = 2.5e9
    crypto_cost_cycles: float = 1.0e6
    score_weights: tuple[float, float] = (0.5, 0.5)

    @property
    def tau(self) -> float:
        return self.topology.slot_length

    @property
    def deadline_s(self) -> float:
        return self.deadline_slots * self.tau


FEATURES_PER_NODE = 5  # x, y, z (normalized), queue fill, committed credit
PAD_POSITION = 2.0     # sentinel coordinate outside the normalized area


@dataclass
class Decision:
    uav_id: int
    demand_id: int
    obs: np.ndarray
    mask: np.ndarray


@dataclass
class Transition:
    uav_id: int
    demand_id: int
    obs: np.ndarray
    action: int
    reward: float
    shaped_reward: float
    next_obs: np.ndarray
    flag: bool
    next_mask: np.ndarray


@dataclass
class TraceRow:
    slot: int
    demand_id: int
    location: int
    action: int        # receiver node id, -1 when held/swept
    hop_delay_s: float
    reward: float
    status: str
    cause: str


@dataclass
class LedgerEvent:
    slot: int
    kind: str
    uav_id: int
    value: float
    outcome: str
    tb_seconds: float


@dataclass
class StepOutcome:
    slot: int
    transitions: list[Transition]
    trace: list[TraceRow]
    consensus_delay_s: float
    consensus_committed: bool
    reward_sum: float
    failures: dict[str, int]


@dataclass
class EpisodeMetrics:
    n_demands: int
    delivered: int
    failed: int
    tsr: float
    mean_e2e_s: float  # nan when nothing was delivered
    objective: float   # tsr / mean E2E, nan when undefined
    reward_sum: float


def base_reward(credit_u: float, credit_k: float, hop_delay_s: float,
                iota: float, varsigma: float) -> float:
    """Trust-gated, delay-discounted reward for one forwarded demand."""
    if varsigma <= 0:
        raise ValueError("varsigma must be positive")
    return credit_u * credit_k / (hop_delay_s * iota + varsigma)


def shaped_reward(base: float, d_uk: float, d_kb: float) -> float:
    """Distance-shaped variant favoring hops that approach the destination."""
    if d_uk + d_kb <= 0:
        raise ValueError("distances must have positive sum")
    return base * d_uk / (d_uk + d_kb)


class RoutingEnv:
    """One simulation instance; single-writer, deterministic per seed bundle."""

    def __init__(self, config: EnvConfig):
        self.config = config
        self.obs_dim = FEATURES_PER_NODE * (1 + config.k_max)
        self.n_actions = config.k_max + 1  # neighbor slots + direct-to-BS slot

    # -- lifecycle -----------------------------------------------------

    def reset(self, seed_seq: np.random.SeedSequence) -> None:
        cfg = self.config
        children = seed_seq.spawn(4)
        self.rng_place = np.random.default_rng(children[0])
        self.rng_mobility = np.random.default_rng(children[1])
        self.rng_behavior = np.random.default_rng(children[2])
        self.rng_scheme = np.random.default_rng(children[3])

        self.topology: Topology = build_topology(cfg.topology, self.rng_place)
        self.slot = 0
        uavs = self.topology.uav_ids
        if not uavs:
            raise ValueError("infeasible config: no UAVs")
        if cfg.n_malicious > len(uavs):
            raise ValueError("more malicious UAVs than UAVs")
        if not self.topology.sd_ids or not self.topology.bs_ids:
            raise ValueError("infeasible config: need at least one SD and one BS")

        malicious = set(self.rng_place.choice(uavs, size=cfg.n_malicious,
                                              replace=False).tolist()) if cfg.n_malicious else set()
        p1, p2, p3 = cfg.malicious_profile
        self.behaviors = {
            uid: (BehaviorProfile(p1, p2, p3, True) if uid in malicious else BehaviorProfile())
            for uid in uavs
        }
        self.records = {
            uid: TrustRecord(probe_window=cfg.probe_window, probe_period=cfg.probe_period)
            for uid in uavs
        }

        # Registration block: every UAV departs with credit 1 on chain.
        self.chain = Blockchain(trust_threshold=cfg.scheme.trust_threshold)
        for uid in uavs:
            self.chain._commit(LedgerRecord(0, RecordKind.CREDIT_UPDATE, uid, 1.0))
        self.ledger_events: list[LedgerEvent] = []

        self.assignment = RoleAssignment(stability_period=cfg.stability_period)
        self._update_roles()
        if len(self.assignment.full_uavs) < 2:
            # Capability thresholds left fewer than two candidates; fall
            # back to everyone so consensus can run at all.
            self.assignment.full_uavs = set(uavs)
            self.assignment.light_uavs = set()
            self.assignment.primary = min(uavs)

        lo, hi = cfg.demand_size_bits
        self.demands: dict[int, Demand] = {}
        for rid in range(cfg.n_demands):
            src = int(self.rng_place.choice(self.topology.sd_ids))
            dst = int(self.rng_place.choice(self.topology.bs_ids))
            self.demands[rid] = Demand(rid, src, dst, float(self.rng_place.uniform(lo, hi)),
                                       cfg.deadline_s, location=src)

        self.reward_total = 0.0
        self._refresh_views()

    def _round_params(self) -> ConsensusParams:
        cfg = self.config
        members = sorted(self.assignment.full_uavs)
        primary = self.assignment.primary
        cost = cfg.crypto_cost_cycles
        if primary is None or primary not in members or len(members) < 2:
            return ConsensusParams(cost, cost, cost, 3.0e9, (2.5e9,))
        replicas = tuple(self.topology.nodes[u].compute for u in members if u != primary)
        return ConsensusParams(cost, cost, cost, self.topology.nodes[primary].compute, replicas)

    def _malicious_members(self) -> set[int]:
        return {uid for uid, b in self.behaviors.items() if b.is_malicious}

    def _update_roles(self) -> None:
        """Refresh the consensus membership from live credits and capability."""
        cfg = self.config
        candidates = [
            Candidate(uid, self.records[uid].credit,
                      self.topology.nodes[uid].compute, self.topology.nodes[uid].storage)
            for uid in self.topology.uav_ids if uid not in self.chain.revoked
        ]
        if candidates:
            self.assignment = select_chus(candidates, cfg.scheme.trust_threshold,
                                          cfg.compute_threshold, self.slot, self.assignment)

    # -- views ---------------------------------------------------------

    def active_uavs(self) -> list[int]:
        return [u for u in self.topology.uav_ids if u not in self.chain.revoked]

    def _refresh_views(self) -> None:
        cfg = self.config
        revoked = self.chain.revoked
        self.neighbor_lists: dict[int, list[int]] = {}
        self.connected_bs: dict[int, list[int]] = {}
        for uid in self.active_uavs():
            self.neighbor_lists[uid] = self.topology.neighbors(uid, exclude=revoked)[:cfg.k_max]
            node = self.topology.nodes[uid]
            if node.uav_class is UavClass.DOWNLINK:
                self.connected_bs[uid] = [b for b in self.topology.bs_ids
                                          if self.topology.distance(uid, b) <= cfg.topology.d_max]
            else:
                self.connected_bs[uid] = []
        queue_lens = self._queue_lengths()
        self._obs_cache = {uid: self._encode_observation(uid, queue_lens)
                           for uid in self.active_uavs()}

    def _encode_observation(self, uid: int, queue_lens: dict[int, int]) -> np.ndarray:
        cfg = self.config
        x_max, y_max = cfg.topology.area
        z_max = cfg.topology.altitude_band[1]

        def entry(node_id: int) -> list[float]:
            pos = self.topology.position(node_id)
            return [
                pos[0] / x_max,
                pos[1] / y_max,
                pos[2] / z_max,
                queue_lens.get(node_id, 0) / cfg.queue_capacity,
                self.chain.committed_credits.get(node_id, 0.0),
            ]

        vec = entry(uid)
        neighbors = self.neighbor_lists[uid]
        for k in range(cfg.k_max):
            if k < len(neighbors):
                vec.extend(entry(neighbors[k]))
            else:
                vec.extend([PAD_POSITION, PAD_POSITION, PAD_POSITION, 0.0, 0.0])
        return np.asarray(vec, dtype=np.float64)

    def _queue_lengths(self) -> dict[int, int]:
        lens: dict[int, int] = {}
        for d in self.demands.values():
            if d.status is DemandStatus.IN_FLIGHT:
                lens[d.location] = lens.get(d.location, 0) + 1
        return lens

    def observe(self, uid: int) -> np.ndarray:
        if uid in self.chain.revoked:
            raise PermissionError(f"UAV {uid} is revoked and excluded from routing")
        return self._obs_cache[uid]

    def agent_mask(self, uid: int) -> np.ndarray:
        """Demand-independent action validity for bootstrapping targets."""
        mask = np.zeros(self.n_actions, dtype=bool)
        mask[:len(self.neighbor_lists.get(uid, []))] = True
        if self.connected_bs.get(uid):
            mask[self.config.k_max] = True
        return mask

    def demand_mask(self, uid: int, demand: Demand) -> np.ndarray:
        """Per-demand validity: the hop to a connected destination BS is
        forced, otherwise any current neighbor slot."""
        mask = np.zeros(self.n_actions, dtype=bool)
        if demand.destination in self.connected_bs.get(uid, []):
            mask[self.config.k_max] = True
            return mask
        mask[:len(self.neighbor_lists.get(uid, []))] = True
        return mask

    def valid_actions(self, uid: int, demand: Demand) -> list[int]:
        """Next-hop node ids currently allowed for this demand."""
        mask = self.demand_mask(uid, demand)
        out = [self.neighbor_lists[uid][k]
               for k in range(len(self.neighbor_lists.get(uid, []))) if mask[k]]
        if mask[self.config.k_max]:
            out.append(demand.destination)
        return out

    def pending_decisions(self) -> list[Decision]:
        """Demands on active UAVs that need an action this slot."""
        out = []
        for rid in sorted(self.demands):
            d = self.demands[rid]
            if d.status is DemandStatus.IN_FLIGHT and d.location in self.neighbor_lists:
                out.append(Decision(d.location, rid, self._obs_cache[d.location],
                                    self.demand_mask(d.location, d)))
        return out

    def episode_done(self) -> bool:
        if self.slot >= self.config.steps_per_episode:
            return True
        return all(d.status is not DemandStatus.IN_FLIGHT for d in self.demands.values())

    # -- dynamics ------------------------------------------------------

    def step(self, actions: dict[tuple[int, int], int]) -> StepOutcome:
        cfg = self.config
        self.slot += 1
        slot = self.slot
        trace: list[TraceRow] = []
        failures: dict[str, int] = {}

        def fail(d: Demand, cause: FailureCause) -> None:
            d.status = DemandStatus.FAILED
            d.cause = cause
            failures[cause.value] = failures.get(cause.value, 0) + 1

        # Sweep demands stranded on UAVs revoked by the previous round.
        for rid in sorted(self.demands):
            d = self.demands[rid]
            if d.status is DemandStatus.IN_FLIGHT and d.location in self.chain.revoked:
                fail(d, FailureCause.DROP)
                trace.append(TraceRow(slot, rid, d.location, -1, 0.0, 0.0,
                                      d.status.value, d.cause.value))

        pre_obs = dict(self._obs_cache)
        pre_masks = {uid: self.agent_mask(uid) for uid in self.neighbor_lists}
        queue_lens = self._queue_lengths()

        # Plan transmissions: sender -> [(demand, receiver)].
        plans: dict[int, list[tuple[Demand, int]]] = {}
        held: list[tuple[Demand, int]] = []

        # SD uploads go to the nearest collector in range with headroom.
        collectors = [u for u in self.active_uavs()
                      if self.topology.nodes[u].uav_class is UavClass.COLLECT]
        upload_load: dict[int, int] = {}
        for rid in sorted(self.demands):
            d = self.demands[rid]
            if d.status is not DemandStatus.IN_FLIGHT or d.location not in self.topology.sd_ids:
                continue
            sd = d.location
            options = sorted((self.topology.distance(sd, u), u) for u in collectors
                             if self.topology.distance(sd, u) <= cfg.topology.d_max)
            target = None
            for _, u in options:
                if queue_lens.get(u, 0) + upload_load.get(u, 0) < cfg.queue_capacity:
                    target = u
                    break
            if target is None:
                held.append((d, sd))
            else:
                upload_load[target] = upload_load.get(target, 0) + 1
                plans.setdefault(sd, []).append((d, target))

        invalid_actions = 0
        for dec in self.pending_decisions():
            d = self.demands[dec.demand_id]
            choice = actions.get((dec.uav_id, dec.demand_id))
            if choice is None or not (0 <= choice < self.n_actions) or not dec.mask[choice]:
                if choice is not None:
                    invalid_actions += 1
                held.append((d, dec.uav_id))
                continue
            receiver = d.destination if choice == cfg.k_max \
                else self.neighbor_lists[dec.uav_id][choice]
            plans.setdefault(dec.uav_id, []).append((d, receiver))

        # Transmit: per-sender bandwidth split, then rate and delay per hop.
        hops: dict[int, tuple[int, int, float, float]] = {}  # rid -> (s, r, delay, link_delay)
        link_delay: dict[tuple[int, int], float] = {}
        for sender in sorted(plans):
            batch = plans[sender]
            shares = allocate_bandwidth([d.size_bits for d, _ in batch],
                                        cfg.channel.total_bandwidth)
            s_pos = self.topology.position(sender)
            s_kind = self.topology.nodes[sender].kind
            for (d, receiver), bw in zip(batch, shares):
                r_pos = self.topology.position(receiver)
                r_kind = self.topology.nodes[receiver].kind
                omega = 0 if (s_kind is NodeKind.UAV and r_kind is NodeKind.UAV) else 1
                dist = max(euclidean_distance(s_pos, r_pos), 1.0)
                delta_h = abs(float(s_pos[2] - r_pos[2]))
                horiz = float(math.hypot(s_pos[0] - r_pos[0], s_pos[1] - r_pos[1]))
                loss = path_loss(dist, omega, delta_h, horiz, cfg.channel)
                rate = transmission_rate(bw, loss, cfg.channel)
                delay = d.size_bits / rate if rate > 0 else math.inf
                hops[d.id] = (sender, receiver, delay, 0.0)
                key = (sender, receiver)
                link_delay[key] = max(link_delay.get(key, 0.0), delay)
        hops = {rid: (s, r, delay, link_delay[(s, r)])
                for rid, (s, r, delay, _) in hops.items()}

        # Held demands burn one slot of deadline budget.
        for d, loc in held:
            d.accumulated_delay_s += cfg.tau
            if d.accumulated_delay_s >= d.deadline_s:
                fail(d, FailureCause.DEADLINE)
            trace.append(TraceRow(slot, d.id, loc, -1, cfg.tau, 0.0, d.status.value,
                                  d.cause.value if d.cause else ""))

        # Resolve each hop: evidence, drops, rewards (positions are still
        # the ones the transmission actually used).
        committed = self.chain.committed_credits
        resolved = []
        for rid in sorted(hops):
            d = self.demands[rid]
            sender, receiver, delay, slot_delay = hops[rid]
            d.path.append((sender, receiver))
            d.accumulated_delay_s += delay
            sender_is_uav = self.topology.nodes[sender].kind is NodeKind.UAV
            receiver_is_bs = self.topology.nodes[receiver].kind is NodeKind.BS

            if sender_is_uav:
                rec = self.records[sender]
                rec.rx_total += 1
                rec.tx_total += 1
                for k in self.neighbor_lists.get(sender, []):
                    rec.add_recommendation(k, positive=True)
                rec.interactions_total += 1
                if receiver_is_bs or committed.get(receiver, 1.0) >= cfg.scheme.trust_threshold:
                    rec.interactions_trusted += 1

            dropped = False
            if not receiver_is_bs:
                b = self.behaviors[receiver]
                if b.is_malicious and self.rng_behavior.random() > b.p_forward:
                    rec_r = self.records[receiver]
                    rec_r.rx_total += 1
                    for k in self.neighbor_lists.get(receiver, []):
                        rec_r.add_recommendation(k, positive=False)
                    dropped = True

            base = 0.0
            shaped = 0.0
            if sender_is_uav and not dropped:
                cu = committed.get(sender, 1.0)
                ck = 1.0 if receiver_is_bs else committed.get(receiver, 1.0)
                base = base_reward(cu, ck, slot_delay, cfg.iota, cfg.varsigma)
                d_uk = max(euclidean_distance(self.topology.position(sender),
                                              self.topology.position(receiver)), 1e-9)
                d_kb = euclidean_distance(self.topology.position(receiver),
                                          self.topology.position(d.destination))
                shaped = shaped_reward(base, d_uk, d_kb)
            resolved.append((d, sender, receiver, delay, base, shaped, dropped))

        # Environment advances: mobility, trust, one consensus round.
        self.topology.step(self.rng_mobility)
        self._update_trust(slot)
        result = self.chain.run_round(self.assignment, self._malicious_members(),
                                      self._round_params(), slot)
        tb = result.delays.total
        outcome_label = "committed" if result.committed else "failed"
        for record in result.records:
            self.ledger_events.append(LedgerEvent(slot, record.kind.value, record.uav_id,
                                                  record.value, outcome_label, tb))
        if not result.committed:
            self.ledger_events.append(LedgerEvent(slot, "round", -1, 0.0, outcome_label, tb))

        # Finalize hop outcomes now the slot's consensus delay is known.
        held_at: dict[int, int] = {}
        for d, loc in held:
            if d.status is DemandStatus.IN_FLIGHT and loc in self.neighbor_lists:
                held_at[loc] = held_at.get(loc, 0) + 1
        arrival_load: dict[int, int] = {}
        transitions: list[Transition] = []
        reward_sum = 0.0
        for d, sender, receiver, delay, base, shaped_r, dropped in resolved:
            sender_is_uav = self.topology.nodes[sender].kind is NodeKind.UAV
            receiver_is_bs = self.topology.nodes[receiver].kind is NodeKind.BS
            if dropped:
                fail(d, FailureCause.DROP)
            elif delay >= cfg.tau:
                fail(d, FailureCause.SLOT_OVERRUN)
            elif tb >= cfg.tau or delay + tb > cfg.tau:
                fail(d, FailureCause.CONSENSUS_OVERRUN)
            elif d.accumulated_delay_s >= d.deadline_s:
                fail(d, FailureCause.DEADLINE)
            elif receiver_is_bs:
                d.status = DemandStatus.DELIVERED
                d.location = receiver
            else:
                load = held_at.get(receiver, 0) + arrival_load.get(receiver, 0)
                if load + 1 > cfg.queue_capacity:
                    fail(d, FailureCause.QUEUE_FULL)
                else:
                    arrival_load[receiver] = arrival_load.get(receiver, 0) + 1
                    d.location = receiver
            flag = d.status is DemandStatus.DELIVERED
            if d.status is DemandStatus.FAILED:
                base = 0.0
                shaped_r = 0.0
            d.earned_reward += base
            if sender_is_uav:
                reward_sum += base
                transitions.append(Transition(
                    uav_id=sender, demand_id=d.id, obs=pre_obs[sender],
                    action=actions.get((sender, d.id), -1), reward=base,
                    shaped_reward=shaped_r, next_obs=pre_obs[sender],
                    flag=flag, next_mask=pre_masks[sender]))
            trace.append(TraceRow(slot, d.id, sender, receiver, delay, base,
                                  d.status.value, d.cause.value if d.cause else ""))

        # Horizon: whatever is still in flight never arrived.
        if self.slot >= cfg.steps_per_episode:
            for rid in sorted(self.demands):
                d = self.demands[rid]
                if d.status is DemandStatus.IN_FLIGHT:
                    fail(d, FailureCause.NOT_ARRIVED)
                    trace.append(TraceRow(slot, rid, d.location, -1, 0.0, 0.0,
                                          d.status.value, d.cause.value))

        if self.slot % cfg.stability_period == 0:
            self._update_roles()
        self._refresh_views()

        for tr in transitions:
            if tr.uav_id in self._obs_cache:
                tr.next_obs = self._obs_cache[tr.uav_id]
                tr.next_mask = self.agent_mask(tr.uav_id)
            else:  # sender revoked this round; nothing left to bootstrap
                tr.next_mask = np.zeros(self.n_actions, dtype=bool)

        if invalid_actions:
            failures["invalid_action"] = invalid_actions
        self.reward_total += reward_sum
        return StepOutcome(slot, transitions, trace, tb, result.committed,
                           reward_sum, failures)

    def _update_trust(self, slot: int) -> None:
        cfg = self.config
        committed = self.chain.committed_credits
        for uid in self.active_uavs():
            rec = self.records[uid]
            b = self.behaviors[uid]
            got_probe = 1 if self.rng_behavior.random() < b.p_probe_ack else 0
            rec.record_probe_round(got_probe)
            for k in self.neighbor_lists.get(uid, []):
                rec.add_recommendation(k, positive=bool(got_probe))
            t_d = direct_trust(rec, cfg.scheme.direct_weights)
            t_i = indirect_trust(rec, committed, cfg.scheme.trust_threshold)
            weights = compute_weights(cfg.scheme, rec.credit, t_d, t_i, self.rng_scheme)
            rec.credit = update_credit(rec.credit, weights, t_d, t_i)
            self.chain.submit_credit(slot, uid, rec.credit)

    # -- metrics -------------------------------------------------------

    LEDGER_LOG_HEADER = ("slot", "kind", "uav_id", "value", "outcome", "Tb_seconds")

    def ledger_event_rows(self) -> list[tuple]:
        """Ledger event log rows in the documented CSV schema."""
        return [(e.slot, e.kind, e.uav_id, e.value, e.outcome, e.tb_seconds)
                for e in self.ledger_events]

    def metrics(self) -> EpisodeMetrics:
        """Episode summary; the reward sum counts completed routes only.

        A route that never reaches its destination BS never becomes a
        routing path, so the hop rewards it collected along the way are
        not realized.  Agents still see every immediate hop reward while
        learning; this is purely the episode-level accounting.
        """
        demands = list(self.demands.values())
        delivered = [d for d in demands if d.status is DemandStatus.DELIVERED]
        failed = [d for d in demands if d.status is DemandStatus.FAILED]
        n = len(demands)
        tsr = 1.0 - len(failed) / n if n else 0.0
        if delivered:
            mean_e2e = sum(d.accumulated_delay_s for d in delivered) / len(delivered)
            objective = tsr / mean_e2e
        else:
            mean_e2e = math.nan
            objective = math.nan
        realized = sum(d.earned_reward for d in delivered)
        return EpisodeMetrics(n, len(delivered), len(failed), tsr, mean_e2e,
                              objective, realized)


def metrics_from_trace(rows: list[TraceRow], n_demands: int) -> EpisodeMetrics:
    """Re-derive episode metrics from a per-slot trace log.

    The hop_delay_s column carries every delay a demand accrued,
    including the slot burned while held, and the reward column carries
    per-hop rewards, so summing per demand and keeping only delivered
    ones reproduces the online accounting exactly.
    """
    status: dict[int, str] = {}
    delays: dict[int, float] = {}
    earned: dict[int, float] = {}
    for row in rows:
        earned[row.demand_id] = earned.get(row.demand_id, 0.0) + row.reward
        if math.isfinite(row.hop_delay_s):
            delays[row.demand_id] = delays.get(row.demand_id, 0.0) + row.hop_delay_s
        status[row.demand_id] = row.status
    delivered = [rid for rid, s in status.items() if s == DemandStatus.DELIVERED.value]
    failed = [rid for rid, s in status.items() if s == DemandStatus.FAILED.value]
    tsr = 1.0 - len(failed) / n_demands if n_demands else 0.0
    if delivered:
        mean_e2e = sum(delays[rid] for rid in delivered) / len(delivered)
        objective = tsr / mean_e2e
    else:
        mean_e2e = math.nan
        objective = math.nan
    realized = sum(earned[rid] for rid in delivered)
    return EpisodeMetrics(n_demands, len(delivered), len(failed), tsr, mean_e2e,
                          objective, realized)
