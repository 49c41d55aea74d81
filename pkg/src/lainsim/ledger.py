"""Lightweight consortium ledger: roles, consensus delay, rounds, membership.

Cryptography is modeled purely as CPU-cycle costs: signing, verifying,
and MAC handling consume configured cycle budgets on the primary and
replica UAVs, which yields the per-phase delays of one consensus round.
Committed records are append-only; each carries a chained digest so a
replay can be checked for tampering.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from enum import Enum


@dataclass
class ConsensusParams:
    sign_cost: float = 1.0e6      # cycles
    verify_cost: float = 1.0e6    # cycles
    mac_cost: float = 1.0e6       # cycles
    primary_speed: float = 3.0e9  # cycles/s
    replica_speeds: tuple[float, ...] = (2.5e9, 2.5e9, 2.5e9)
    block_size_bytes: int = 15_000  # metadata only, appears in no delay formula

    def __post_init__(self):
        values = (self.sign_cost, self.verify_cost, self.mac_cost, self.primary_speed,
                  *self.replica_speeds)
        if any(v <= 0 for v in values):
            raise ValueError("costs and speeds must be positive")


@dataclass
class PhaseDelays:
    t1: float
    t2: float
    t3: float
    t4: float

    @property
    def total(self) -> float:
        return self.t1 + self.t2 + self.t3 + self.t4


def fault_budget(k: int) -> tuple[float, int]:
    """Fault tolerance F = (K-1)/3 and the quorum 2*ceil(F)+1."""
    if k < 1:
        raise ValueError("need at least one participant")
    f = (k - 1) / 3.0
    return f, 2 * math.ceil(f) + 1


def consensus_delay(k: int, params: ConsensusParams) -> PhaseDelays:
    """Per-phase delays of one round with K participants.

    Collection: the primary verifies signature+MAC for all K inputs.
    Pre-prepare: the primary signs the block and MACs it to each
    replica, then every replica verifies the block and its K
    transactions.  Prepare: the primary verifies a quorum of prepare
    messages while replicas additionally sign and MAC their own.
    Commit: everyone signs, MACs to the other K-1, and verifies a
    quorum, bounded by the slowest participant.
    """
    if k < 2:
        raise ValueError("consensus needs at least two participants")
    ev, em, es = params.verify_cost, params.mac_cost, params.sign_cost
    dp = params.primary_speed
    replicas = params.replica_speeds
    if not replicas:
        raise ValueError("need at least one replica speed")
    _, quorum = fault_budget(k)

    t1 = k * (ev + em) / dp

    t2_primary = (es + (k - 1) * em) / dp
    t2_replica = max((k + 1) * (ev + em) / dc for dc in replicas)
    t2 = t2_primary + t2_replica

    t3_primary = quorum * (ev + em) / dp
    t3_replica = max((quorum * (ev + em) + es + (k - 1) * em) / dc for dc in replicas)
    t3 = max(t3_primary, t3_replica)

    t4 = (es + (k - 1) * em + quorum * (ev + em)) / min(dp, min(replicas))
    return PhaseDelays(t1, t2, t3, t4)


def composite_score(credit: float, compute: float, storage: float,
                    compute_max: float, storage_max: float,
                    weights: tuple[float, float] = (0.5, 0.5)) -> float:
    """Credit-gated capability score used for leader election."""
    if compute_max <= 0 or storage_max <= 0:
        raise ValueError("capability maxima must be positive")
    w1, w2 = weights
    if abs(w1 + w2 - 1.0) > 1e-12:
        raise ValueError("capability weights must sum to 1")
    return credit * (w1 * compute / compute_max + w2 * storage / storage_max)


@dataclass
class RoleAssignment:
    """Current full/light split, the primary, and per-UAV service counters."""

    full_uavs: set[int] = field(default_factory=set)
    light_uavs: set[int] = field(default_factory=set)
    primary: int | None = None
    service_counters: dict[int, int] = field(default_factory=dict)
    stability_period: int = 50  # slots between membership updates
    skipped_updates: int = 0


@dataclass
class Candidate:
    uav_id: int
    credit: float
    compute: float
    storage: float


def select_chus(candidates: list[Candidate], trust_threshold: float,
                compute_threshold: float, slot: int,
                assignment: RoleAssignment) -> RoleAssignment:
    """Membership update of the full-UAV set, run every stability period.

    UAVs qualify with credit and compute strictly above their
    thresholds.  Members that stopped qualifying are dropped and their
    service counters reset; survivors accrue the elapsed period of
    service and retire once they have served two full periods, so no
    UAV holds consensus duty indefinitely.  The primary is the
    highest-scoring member, ties broken by lowest id.  If nobody
    qualifies the previous assignment is kept and the skip is counted.
    """
    if slot % assignment.stability_period != 0:
        return assignment
    m = assignment.stability_period
    qualified = {c.uav_id for c in candidates
                 if c.credit > trust_threshold and c.compute > compute_threshold}
    if not qualified:
        assignment.skipped_updates += 1
        return assignment

    counters = dict(assignment.service_counters)
    for uid in assignment.full_uavs:
        if uid not in qualified:
            counters[uid] = 0
    for uid in qualified:
        if uid in assignment.full_uavs:
            counters[uid] = counters.get(uid, 0) + m
        else:
            counters.setdefault(uid, 0)

    retired = {uid for uid in qualified if counters.get(uid, 0) >= 2 * m}
    for uid in retired:
        counters[uid] = 0
    members = qualified - retired
    if not members:
        # Everyone hit the rotation cap at once; restart them all fresh.
        members = qualified

    by_id = {c.uav_id: c for c in candidates}
    compute_max = max(c.compute for c in candidates)
    storage_max = max(c.storage for c in candidates)
    scores = {
        uid: composite_score(by_id[uid].credit, by_id[uid].compute, by_id[uid].storage,
                             compute_max, storage_max)
        for uid in members
    }
    primary = min(members, key=lambda uid: (-scores[uid], uid))
    all_ids = {c.uav_id for c in candidates}
    return RoleAssignment(
        full_uavs=set(members),
        light_uavs=all_ids - set(members),
        primary=primary,
        service_counters=counters,
        stability_period=m,
        skipped_updates=assignment.skipped_updates,
    )


class RecordKind(Enum):
    CREDIT_UPDATE = "credit_update"
    JOIN = "join"
    EXIT = "exit"
    REVOCATION = "revocation"


@dataclass(frozen=True)
class LedgerRecord:
    slot: int
    kind: RecordKind
    uav_id: int
    value: float = 0.0
    digest: str = ""

    def payload(self) -> str:
        return f"{self.slot}|{self.kind.value}|{self.uav_id}|{self.value!r}"


def _chain_digest(prev_digest: str, payload: str) -> str:
    return hashlib.sha256((prev_digest + "|" + payload).encode()).hexdigest()


@dataclass
class RoundResult:
    committed: bool
    delays: PhaseDelays
    records: list[LedgerRecord]
    revoked: set[int]


class Blockchain:
    """Pending pool plus the committed, hash-chained record log."""

    GENESIS = "genesis"

    def __init__(self, trust_threshold: float = 0.8):
        self.trust_threshold = trust_threshold
        self.pending: list[LedgerRecord] = []
        self.committed: list[LedgerRecord] = []
        self.committed_credits: dict[int, float] = {}
        self.revoked: set[int] = set()
        self.active: set[int] = set()

    def submit_credit(self, slot: int, uav_id: int, credit: float) -> None:
        self.pending.append(LedgerRecord(slot, RecordKind.CREDIT_UPDATE, uav_id, credit))

    def submit_membership(self, slot: int, uav_id: int, join: bool, registered: bool = True) -> LedgerRecord:
        """Queue a join or exit request; joins need GCS registration."""
        if join and not registered:
            raise PermissionError(f"join request for UAV {uav_id} lacks registration")
        record = LedgerRecord(slot, RecordKind.JOIN if join else RecordKind.EXIT, uav_id)
        self.pending.append(record)
        return record

    def _commit(self, record: LedgerRecord) -> None:
        prev = self.committed[-1].digest if self.committed else self.GENESIS
        sealed = replace(record, digest=_chain_digest(prev, record.payload()))
        self.committed.append(sealed)
        if sealed.kind is RecordKind.CREDIT_UPDATE:
            self.committed_credits[sealed.uav_id] = sealed.value
        elif sealed.kind is RecordKind.JOIN:
            self.active.add(sealed.uav_id)
            self.committed_credits[sealed.uav_id] = 1.0
        elif sealed.kind is RecordKind.EXIT:
            self.active.discard(sealed.uav_id)
        elif sealed.kind is RecordKind.REVOCATION:
            self.revoked.add(sealed.uav_id)

    def run_round(self, assignment: RoleAssignment, malicious_participants: set[int],
                  params: ConsensusParams, slot: int) -> RoundResult:
        """Execute one round over the pending pool.

        The round commits when the number of malicious participants stays
        within floor(F); otherwise every pending record stays queued and
        committed credits go stale.  On commit, any UAV whose recorded
        credit is at or below the threshold gets a revocation record and
        is excluded from routing from the next slot on.
        """
        k = len(assignment.full_uavs)
        if k < 2:
            return RoundResult(False, PhaseDelays(0.0, 0.0, 0.0, 0.0), [], set())
        delays = consensus_delay(k, params)
        f, _ = fault_budget(k)
        n_bad = len(malicious_participants & assignment.full_uavs)
        if n_bad > math.floor(f):
            return RoundResult(False, delays, [], set())

        batch, self.pending = self.pending, []
        newly_revoked: set[int] = set()
        for record in batch:
            self._commit(record)
        for record in batch:
            if (record.kind is RecordKind.CREDIT_UPDATE
                    and record.value <= self.trust_threshold
                    and record.uav_id not in self.revoked):
                newly_revoked.add(record.uav_id)
        for uid in sorted(newly_revoked):
            self._commit(LedgerRecord(slot, RecordKind.REVOCATION, uid))
        n_new = len(batch) + len(newly_revoked)
        records = self.committed[-n_new:] if n_new else []
        return RoundResult(True, delays, records, newly_revoked)

    def verify_chain(self) -> bool:
        prev = self.GENESIS
        for record in self.committed:
            if record.digest != _chain_digest(prev, record.payload()):
                return False
            prev = record.digest
        return True

    def replay_credits(self) -> dict[int, float]:
        """Recompute final per-UAV credits from the committed log alone."""
        if not self.verify_chain():
            raise ValueError("committed chain fails digest verification")
        credits: dict[int, float] = {}
        for record in self.committed:
            if record.kind is RecordKind.CREDIT_UPDATE:
                credits[record.uav_id] = record.value
            elif record.kind is RecordKind.JOIN:
                credits[record.uav_id] = 1.0
            elif record.kind is RecordKind.EXIT:
                credits.pop(record.uav_id, None)
        return credits
