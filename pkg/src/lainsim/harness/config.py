"""Experiment configuration: YAML files with unit-suffixed keys.

Every block maps onto one subsystem's dataclass; unknown keys are
collected and reported together so a typo cannot silently fall back to
a default.  Defaults follow the reference parameter table (0.5 s
slots, 2.4 GHz carrier, 40 dBm transmit power, and so on).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..channel import ChannelParams
from ..env import EnvConfig
from ..learner import TrainConfig
from ..topology import TopologyConfig
from ..trust import WeightKind, WeightScheme
from .trustsim import TrustScenarioConfig

SCENARIOS = (
    "trust_detection",
    "trust_threshold",
    "training_convergence",
    "sigma_sensitivity",
    "algo_comparison",
    "scale_sweep",
)


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


@dataclass
class ExperimentConfig:
    scenario: str
    master_seed: int = 12345
    n_seeds: int = 10
    workers: int = 1
    env: EnvConfig = field(default_factory=EnvConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    trust_scenario: TrustScenarioConfig = field(default_factory=TrustScenarioConfig)
    sweep: dict = field(default_factory=dict)


def _take(block: dict, allowed: dict, context: str, problems: list[str]) -> dict:
    """Pick known keys out of a config block, recording unknown ones."""
    out = {}
    for key, value in block.items():
        if key not in allowed:
            problems.append(f"unknown key '{context}.{key}'")
            continue
        out[allowed[key]] = value
    return out


_TOPOLOGY_KEYS = {
    "area_x_m": "area_x", "area_y_m": "area_y",
    "altitude_min_m": "alt_min", "altitude_max_m": "alt_max",
    "d_min_m": "d_min", "d_max_m": "d_max",
    "n_sd": "n_sd", "n_uav": "n_uav", "n_bs": "n_bs",
    "speed_min_mps": "speed_min", "speed_max_mps": "speed_max",
    "slot_length_s": "slot_length", "heading_persistence": "heading_persistence",
}

_CHANNEL_KEYS = {
    "carrier_frequency_hz": "carrier_frequency", "light_speed_mps": "light_speed",
    "rho1": "rho1", "rho2": "rho2", "eta_los_db": "eta_los", "eta_nlos_db": "eta_nlos",
    "tx_power_dbm": "tx_power_dbm", "noise_power_dbm": "noise_power_dbm",
    "total_bandwidth_hz": "total_bandwidth",
}

_TRUST_KEYS = {
    "scheme": "kind", "beta": "beta", "trust_threshold": "trust_threshold",
    "direct_weights": "direct_weights",
}

_ENV_KEYS = {
    "n_demands": "n_demands", "demand_size_min_bits": "size_min",
    "demand_size_max_bits": "size_max", "deadline_slots": "deadline_slots",
    "queue_capacity": "queue_capacity", "k_max": "k_max", "iota": "iota",
    "varsigma": "varsigma", "steps_per_episode": "steps_per_episode",
    "n_malicious": "n_malicious", "malicious_profile": "malicious_profile",
    "probe_window_slots": "probe_window", "probe_period_slots": "probe_period",
    "stability_period_slots": "stability_period",
    "compute_threshold_cps": "compute_threshold",
    "crypto_cost_cycles": "crypto_cost_cycles",
}

_TRAIN_KEYS = {
    "learning_rate": "learning_rate", "gamma": "gamma", "batch_size": "batch_size",
    "target_period_steps": "target_period", "soft_tau": "soft_tau",
    "buffer_capacity": "buffer_capacity", "per_alpha": "per_alpha",
    "is_beta_start": "is_beta_start", "is_beta_end": "is_beta_end",
    "eps_start": "eps_start", "eps_end": "eps_end",
    "eps_decay_fraction": "eps_decay_fraction", "episodes": "episodes",
    "hidden_sizes": "hidden_sizes", "dtype": "dtype", "optimizer": "optimizer",
}

_TRUST_SCENARIO_KEYS = {
    "n_uavs": "n_uavs", "n_malicious": "n_malicious", "horizon_slots": "horizon",
    "profile": "profile", "demand_rate": "demand_rate",
    "interaction_rate": "interaction_rate", "probe_window_slots": "probe_window",
    "probe_period_slots": "probe_period", "optimism_prior": "optimism_prior",
}

_SWEEP_KEYS = (
    "p_triples", "schemes", "thresholds", "algorithms", "learning_rates",
    "n_demands", "n_uavs", "n_malicious", "varsigma", "train_episodes",
    "eval_episodes",
)

_TOP_KEYS = ("scenario", "master_seed", "seeds", "workers", "topology", "channel",
             "trust", "env", "learner", "trust_scenario", "sweep")


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError([f"not valid YAML: {exc}"]) from exc
    if not isinstance(raw, dict):
        raise ConfigError(["config root must be a mapping"])
    return parse_config(raw)


def parse_config(raw: dict) -> ExperimentConfig:
    problems: list[str] = []
    for key in raw:
        if key not in _TOP_KEYS:
            problems.append(f"unknown key '{key}'")

    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        problems.append(f"scenario must be one of {SCENARIOS}, got {scenario!r}")

    topo_kw = _take(raw.get("topology", {}) or {}, _TOPOLOGY_KEYS, "topology", problems)
    chan_kw = _take(raw.get("channel", {}) or {}, _CHANNEL_KEYS, "channel", problems)
    trust_kw = _take(raw.get("trust", {}) or {}, _TRUST_KEYS, "trust", problems)
    env_kw = _take(raw.get("env", {}) or {}, _ENV_KEYS, "env", problems)
    train_kw = _take(raw.get("learner", {}) or {}, _TRAIN_KEYS, "learner", problems)
    ts_kw = _take(raw.get("trust_scenario", {}) or {}, _TRUST_SCENARIO_KEYS,
                  "trust_scenario", problems)

    sweep = raw.get("sweep", {}) or {}
    for key in sweep:
        if key not in _SWEEP_KEYS:
            problems.append(f"unknown key 'sweep.{key}'")
    if problems:
        raise ConfigError(problems)

    topo = TopologyConfig()
    if topo_kw:
        d = TopologyConfig(
            area=(topo_kw.get("area_x", topo.area[0]), topo_kw.get("area_y", topo.area[1])),
            altitude_band=(topo_kw.get("alt_min", topo.altitude_band[0]),
                           topo_kw.get("alt_max", topo.altitude_band[1])),
            d_min=topo_kw.get("d_min", topo.d_min),
            d_max=topo_kw.get("d_max", topo.d_max),
            n_sd=topo_kw.get("n_sd", topo.n_sd),
            n_uav=topo_kw.get("n_uav", topo.n_uav),
            n_bs=topo_kw.get("n_bs", topo.n_bs),
            speed_range=(topo_kw.get("speed_min", topo.speed_range[0]),
                         topo_kw.get("speed_max", topo.speed_range[1])),
            slot_length=topo_kw.get("slot_length", topo.slot_length),
            heading_persistence=topo_kw.get("heading_persistence", 0.0),
        )
        topo = d

    channel = ChannelParams(**chan_kw)

    if "kind" in trust_kw:
        trust_kw["kind"] = WeightKind(trust_kw["kind"])
    if "direct_weights" in trust_kw:
        trust_kw["direct_weights"] = tuple(trust_kw["direct_weights"])
    scheme = WeightScheme(**trust_kw)

    size_min = env_kw.pop("size_min", None)
    size_max = env_kw.pop("size_max", None)
    if "malicious_profile" in env_kw:
        env_kw["malicious_profile"] = tuple(env_kw["malicious_profile"])
    env = EnvConfig(topology=topo, channel=channel, scheme=scheme, **env_kw)
    if size_min is not None or size_max is not None:
        lo, hi = env.demand_size_bits
        env.demand_size_bits = (size_min if size_min is not None else lo,
                                size_max if size_max is not None else hi)
    env.steps_per_episode = env_kw.get("steps_per_episode", env.steps_per_episode)

    if "hidden_sizes" in train_kw:
        train_kw["hidden_sizes"] = tuple(train_kw["hidden_sizes"])
    train = TrainConfig(**train_kw)
    train.steps_per_episode = env.steps_per_episode

    if "profile" in ts_kw:
        ts_kw["profile"] = tuple(ts_kw["profile"])
    ts = TrustScenarioConfig(trust_threshold=scheme.trust_threshold,
                             beta=scheme.beta, **ts_kw)

    return ExperimentConfig(
        scenario=scenario,
        master_seed=int(raw.get("master_seed", 12345)),
        n_seeds=int(raw.get("seeds", 10)),
        workers=int(raw.get("workers", 1)),
        env=env,
        train=train,
        trust_scenario=ts,
        sweep=sweep,
    )
