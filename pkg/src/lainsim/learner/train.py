"""Multi-agent training loop: decentralized agents, shared environment.

One agent per UAV, each with its own networks, buffer, and random
stream.  Every slot the agents pick next hops for the demands they
hold under an epsilon-greedy policy, the environment advances, the
resulting transitions are stored (distance-shaped reward variants shape
at storage time), and every agent takes one gradient step.  Reward
curves always record the unshaped environment reward so the algorithm
variants stay comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..env import EnvConfig, RoutingEnv
from .agent import ALGORITHMS, Agent, TrainConfig, config_for_algorithm
from .net import masked_argmax, save_checkpoint

ENV_STREAM = 0
AGENT_STREAM = 1
EVAL_STREAM = 2


def episode_seed(master_seed: int, episode: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed, ENV_STREAM, episode])


def agent_seed(master_seed: int, uav_id: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed, AGENT_STREAM, uav_id])


@dataclass
class EpisodeStats:
    episode: int
    reward_sum: float
    mean_loss: float
    epsilon: float
    tsr: float
    mean_e2e_s: float


@dataclass
class TrainResult:
    algorithm: str
    master_seed: int
    curves: list[EpisodeStats]
    agents: dict[int, Agent] = field(repr=False, default_factory=dict)

    def trailing_mean_reward(self, window: int = 100) -> float:
        tail = [c.reward_sum for c in self.curves[-window:]]
        return float(np.mean(tail))


def _select_actions(env: RoutingEnv, agents: dict[int, Agent], epsilon: float) -> dict:
    """Greedy/exploratory choices for all pending demands, one forward
    pass per agent since its demands share the same observation."""
    actions: dict[tuple[int, int], int] = {}
    by_agent: dict[int, list] = {}
    for dec in env.pending_decisions():
        by_agent.setdefault(dec.uav_id, []).append(dec)
    for uid in sorted(by_agent):
        agent = agents[uid]
        q = None
        for dec in by_agent[uid]:
            if not dec.mask.any():
                continue
            if epsilon > 0.0 and agent.rng.random() < epsilon:
                valid = np.flatnonzero(dec.mask)
                choice = int(valid[agent.rng.integers(0, valid.size)])
            else:
                if q is None:
                    q = agent.online.forward(dec.obs)
                choice = int(masked_argmax(q[None, :], dec.mask[None, :])[0])
            actions[(uid, dec.demand_id)] = choice
    return actions


def run_training(env_config: EnvConfig, algorithm: str, train_config: TrainConfig,
                 master_seed: int, checkpoint_dir=None) -> TrainResult:
    """Train one algorithm variant on one seeded environment family."""
    cfg = config_for_algorithm(train_config, algorithm)
    env = RoutingEnv(env_config)
    env.reset(episode_seed(master_seed, 0))
    agents = {
        uid: Agent(uid, env.obs_dim, env.n_actions, cfg,
                   np.random.default_rng(agent_seed(master_seed, uid)))
        for uid in env.topology.uav_ids
    }

    curves: list[EpisodeStats] = []
    for ep in range(cfg.episodes):
        env.reset(episode_seed(master_seed, ep))
        epsilon = cfg.epsilon_at(ep)
        losses: list[float] = []
        while not env.episode_done():
            actions = _select_actions(env, agents, epsilon)
            outcome = env.step(actions)
            for tr in outcome.transitions:
                reward = tr.shaped_reward if cfg.use_shaped else tr.reward
                agents[tr.uav_id].remember(tr.obs, tr.action, reward, tr.next_obs,
                                           tr.flag, tr.next_mask)
            for uid in sorted(agents):
                loss = agents[uid].train_step(ep)
                if loss is not None:
                    losses.append(loss)
        m = env.metrics()
        curves.append(EpisodeStats(
            episode=ep,
            reward_sum=m.reward_sum,
            mean_loss=float(np.mean(losses)) if losses else float("nan"),
            epsilon=epsilon,
            tsr=m.tsr,
            mean_e2e_s=m.mean_e2e_s,
        ))

    if checkpoint_dir is not None:
        import os
        os.makedirs(checkpoint_dir, exist_ok=True)
        for uid, agent in agents.items():
            save_checkpoint(os.path.join(checkpoint_dir, f"agent_{uid:03d}.net"),
                            agent.online, agent.opt)
    return TrainResult(algorithm, master_seed, curves, agents)


def evaluate_policy(env_config: EnvConfig, agents: dict[int, Agent],
                    master_seed: int, n_episodes: int):
    """Greedy rollouts of trained agents; returns per-episode metrics.

    Evaluation seeds come from a stream disjoint from the training
    episodes, and agents whose ids exceed the evaluation topology reuse
    the trained pool round-robin so bigger grids can be scored too.
    """
    from ..env import EpisodeMetrics  # local import to keep module load light

    env = RoutingEnv(env_config)
    results: list[EpisodeMetrics] = []
    trained = sorted(agents)
    for ep in range(n_episodes):
        env.reset(np.random.SeedSequence([master_seed, EVAL_STREAM, ep]))
        pool = {uid: agents[trained[i % len(trained)]]
                for i, uid in enumerate(env.topology.uav_ids)}
        while not env.episode_done():
            actions = _select_actions(env, pool, epsilon=0.0)
            env.step(actions)
        results.append(env.metrics())
    return results


__all__ = ["ALGORITHMS", "EpisodeStats", "TrainResult", "run_training",
           "evaluate_policy", "episode_seed", "agent_seed"]
