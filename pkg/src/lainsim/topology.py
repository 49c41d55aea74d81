"""Nodes, 3D random-walk mobility, and the time-varying connectivity graph.

Ground nodes (sensor devices and base stations) sit at z = 0 and never
move.  UAVs fly a random-walk: at the start of every slot a new speed,
azimuth and elevation are drawn uniformly from their configured ranges,
the UAV moves with that constant velocity for one slot, and positions
that would leave the operating area or altitude band are reflected at
the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np


class NodeKind(Enum):
    SD = "sd"
    UAV = "uav"
    BS = "bs"


class UavClass(Enum):
    COLLECT = "collect"
    RELAY = "relay"
    DOWNLINK = "downlink"


@dataclass
class Node:
    """A network node with a fixed identity and a 3D position in meters."""

    id: int
    kind: NodeKind
    position: np.ndarray
    uav_class: UavClass | None = None
    compute: float = 0.0   # cycles/s
    storage: float = 0.0   # bytes

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        if self.position.shape != (3,):
            raise ValueError("position must be a 3-vector")
        if self.kind in (NodeKind.SD, NodeKind.BS) and self.position[2] != 0.0:
            raise ValueError(f"{self.kind.value} nodes must sit at z = 0")


@dataclass
class MobilityState:
    """Current speed (m/s) and heading of one UAV, plus the slot length."""

    speed: float
    azimuth: float      # rad, [0, 2*pi)
    elevation: float    # rad, [-pi/2, pi/2]
    slot_length: float  # s


@dataclass
class TopologyConfig:
    area: tuple[float, float] = (15_000.0, 5_000.0)
    altitude_band: tuple[float, float] = (200.0, 400.0)
    d_min: float = 10.0
    d_max: float = 8_000.0
    n_sd: int = 4
    n_uav: int = 8
    n_bs: int = 2
    speed_range: tuple[float, float] = (3.0, 5.0)
    slot_length: float = 0.5
    # Probability of keeping last slot's heading instead of resampling.
    heading_persistence: float = 0.0

    def __post_init__(self):
        if not self.d_min < self.d_max:
            raise ValueError("d_min must be smaller than d_max")
        if not self.altitude_band[0] > 0:
            raise ValueError("altitude band must be strictly above ground")


def euclidean_distance(a, b) -> float:
    """Straight-line distance between two 3D points in meters."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.sqrt(np.sum((a - b) ** 2)))


def velocity_vector(speed: float, azimuth: float, elevation: float) -> np.ndarray:
    """Decompose (speed, azimuth, elevation) into a Cartesian velocity."""
    cos_el = math.cos(elevation)
    return np.array(
        [
            speed * cos_el * math.cos(azimuth),
            speed * cos_el * math.sin(azimuth),
            speed * math.sin(elevation),
        ]
    )


def _reflect(value: float, lo: float, hi: float) -> float:
    """Fold a coordinate back into [lo, hi] by mirroring at the walls."""
    if lo >= hi:
        raise ValueError("empty interval")
    span = hi - lo
    v = (value - lo) % (2.0 * span)
    if v > span:
        v = 2.0 * span - v
    return lo + v


def draw_heading(config: TopologyConfig, rng: np.random.Generator) -> tuple[float, float, float]:
    """Draw (speed, azimuth, elevation) uniformly from their ranges."""
    speed = rng.uniform(config.speed_range[0], config.speed_range[1])
    azimuth = rng.uniform(0.0, 2.0 * math.pi)
    elevation = rng.uniform(-math.pi / 2.0, math.pi / 2.0)
    return speed, azimuth, elevation


def step_mobility(
    node: Node,
    state: MobilityState,
    config: TopologyConfig,
    rng: np.random.Generator,
) -> tuple[Node, MobilityState]:
    """Advance one UAV by one slot of random-walk motion.

    Draws a fresh heading (unless heading persistence keeps the old one),
    displaces the UAV by velocity * slot_length, and reflects the new
    position into the operating area and altitude band.
    """
    if node.kind is not NodeKind.UAV:
        raise ValueError("only UAVs move; SD and BS nodes remain fixed")
    if config.heading_persistence > 0.0 and rng.random() < config.heading_persistence:
        speed, azimuth, elevation = state.speed, state.azimuth, state.elevation
    else:
        speed, azimuth, elevation = draw_heading(config, rng)
    new_state = MobilityState(speed, azimuth, elevation, state.slot_length)
    pos = node.position + velocity_vector(speed, azimuth, elevation) * state.slot_length
    pos[0] = _reflect(pos[0], 0.0, config.area[0])
    pos[1] = _reflect(pos[1], 0.0, config.area[1])
    pos[2] = _reflect(pos[2], config.altitude_band[0], config.altitude_band[1])
    return replace(node, position=pos), new_state


def neighbor_set(u: Node, all_nodes: dict[int, Node], d_max: float,
                 d_min: float = 0.0) -> tuple[list[int], list[tuple[int, int]]]:
    """UAV neighbors of ``u`` within d_max, plus min-separation violations.

    Returns the ids of UAVs within communication range (inclusive
    boundary) sorted by ascending distance, and the list of UAV pairs
    closer than the configured safe distance.  Violations are reported,
    not prevented.
    """
    if u.kind is not NodeKind.UAV:
        raise ValueError("neighbor sets are defined for UAVs")
    within: list[tuple[float, int]] = []
    violations: list[tuple[int, int]] = []
    for other in all_nodes.values():
        if other.id == u.id or other.kind is not NodeKind.UAV:
            continue
        d = euclidean_distance(u.position, other.position)
        if d <= d_max:
            within.append((d, other.id))
        if d < d_min:
            violations.append((u.id, other.id))
    within.sort()
    return [nid for _, nid in within], violations


@dataclass
class Topology:
    """Mutable container for all nodes plus per-UAV mobility state."""

    config: TopologyConfig
    nodes: dict[int, Node] = field(default_factory=dict)
    mobility: dict[int, MobilityState] = field(default_factory=dict)

    @property
    def uav_ids(self) -> list[int]:
        return sorted(n.id for n in self.nodes.values() if n.kind is NodeKind.UAV)

    @property
    def sd_ids(self) -> list[int]:
        return sorted(n.id for n in self.nodes.values() if n.kind is NodeKind.SD)

    @property
    def bs_ids(self) -> list[int]:
        return sorted(n.id for n in self.nodes.values() if n.kind is NodeKind.BS)

    def position(self, node_id: int) -> np.ndarray:
        return self.nodes[node_id].position

    def distance(self, a: int, b: int) -> float:
        return euclidean_distance(self.nodes[a].position, self.nodes[b].position)

    def neighbors(self, uav_id: int, exclude: set[int] | None = None) -> list[int]:
        """In-range UAV ids sorted by distance, minus excluded (revoked) ids."""
        ids, _ = neighbor_set(self.nodes[uav_id], self.nodes, self.config.d_max)
        if exclude:
            ids = [i for i in ids if i not in exclude]
        return ids

    def separation_violations(self) -> list[tuple[int, int]]:
        """All UAV pairs currently closer than d_min."""
        out = []
        uavs = self.uav_ids
        for i, a in enumerate(uavs):
            for b in uavs[i + 1:]:
                if self.distance(a, b) < self.config.d_min:
                    out.append((a, b))
        return out

    def step(self, rng: np.random.Generator) -> None:
        """Advance every UAV one slot; fixed nodes stay put."""
        for uid in self.uav_ids:
            node, state = step_mobility(self.nodes[uid], self.mobility[uid], self.config, rng)
            self.nodes[uid] = node
            self.mobility[uid] = state


def position_trace_rows(topo: "Topology", rng: np.random.Generator,
                        n_slots: int) -> list[tuple]:
    """Advance the fleet and collect (slot, node_id, x, y, z) rows.

    Slot 0 records the starting layout; each later slot follows one
    mobility step.  Feed the rows to the harness CSV writer to emit the
    optional position trace.
    """
    rows: list[tuple] = []
    for slot in range(n_slots + 1):
        if slot > 0:
            topo.step(rng)
        for nid in sorted(topo.nodes):
            x, y, z = topo.nodes[nid].position
            rows.append((slot, nid, float(x), float(y), float(z)))
    return rows


def build_topology(config: TopologyConfig, rng: np.random.Generator,
                   compute_range: tuple[float, float] = (2.0e9, 4.0e9),
                   storage_range: tuple[float, float] = (8.0e9, 32.0e9)) -> Topology:
    """Place SDs, UAVs, and BSs and initialize per-UAV mobility.

    SDs are placed in the left third of the area, BSs in the right third,
    both on the ground.  UAVs are split as evenly as possible across the
    three x-axis bands, which also fixes their operational class:
    collectors over the SD side, relays in the middle, downlinkers over
    the BS side.
    """
    if config.n_uav < 1:
        raise ValueError("need at least one UAV")
    topo = Topology(config=config)
    x_max, y_max = config.area
    z_lo, z_hi = config.altitude_band
    next_id = 0

    for _ in range(config.n_sd):
        pos = np.array([rng.uniform(0, x_max / 3.0), rng.uniform(0, y_max), 0.0])
        topo.nodes[next_id] = Node(next_id, NodeKind.SD, pos)
        next_id += 1

    bands = {
        UavClass.COLLECT: (0.0, x_max / 3.0),
        UavClass.RELAY: (x_max / 3.0, 2.0 * x_max / 3.0),
        UavClass.DOWNLINK: (2.0 * x_max / 3.0, x_max),
    }
    classes = list(bands)
    for i in range(config.n_uav):
        cls = classes[i % 3] if config.n_uav >= 3 else classes[i]
        lo, hi = bands[cls]
        pos = np.array([rng.uniform(lo, hi), rng.uniform(0, y_max), rng.uniform(z_lo, z_hi)])
        topo.nodes[next_id] = Node(
            next_id, NodeKind.UAV, pos, uav_class=cls,
            compute=rng.uniform(*compute_range),
            storage=rng.uniform(*storage_range),
        )
        speed, azimuth, elevation = draw_heading(config, rng)
        topo.mobility[next_id] = MobilityState(speed, azimuth, elevation, config.slot_length)
        next_id += 1

    for _ in range(config.n_bs):
        pos = np.array([rng.uniform(2.0 * x_max / 3.0, x_max), rng.uniform(0, y_max), 0.0])
        topo.nodes[next_id] = Node(next_id, NodeKind.BS, pos)
        next_id += 1
    return topo
