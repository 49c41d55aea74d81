"""One routing agent: value nets, replay, action selection, train step."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .net import MLP, Adam, Sgd, masked_argmax, masked_max, soft_update
from .replay import PrioritizedReplay, ReplayBuffer


class TrainingDiverged(RuntimeError):
    pass


@dataclass
class TrainConfig:
    learning_rate: float = 0.005
    gamma: float = 0.95
    batch_size: int = 64
    target_period: int = 100     # train steps between soft updates
    soft_tau: float = 0.01       # blend coefficient mu
    buffer_capacity: int = 1_000_000
    per_alpha: float = 0.6
    is_beta_start: float = 0.4
    is_beta_end: float = 1.0
    eps_start: float = 1.0
    eps_end: float = 0.01
    eps_decay_fraction: float = 0.8   # fraction of episodes spent decaying
    episodes: int = 500
    steps_per_episode: int = 12
    hidden_sizes: tuple[int, ...] = (256, 256)
    dtype: str = "float64"
    optimizer: str = "adam"      # "adam" or "sgd"
    use_double: bool = True
    use_per: bool = True
    use_shaped: bool = True

    def epsilon_at(self, episode: int) -> float:
        """Linear decay over the first eps_decay_fraction of episodes."""
        cutoff = self.eps_decay_fraction * self.episodes
        if cutoff <= 0 or episode >= cutoff:
            return self.eps_end
        frac = episode / cutoff
        return self.eps_start + frac * (self.eps_end - self.eps_start)

    def is_beta_at(self, episode: int) -> float:
        if self.episodes <= 1:
            return self.is_beta_end
        frac = min(1.0, episode / (self.episodes - 1))
        return self.is_beta_start + frac * (self.is_beta_end - self.is_beta_start)


ALGORITHMS = {
    # name: (double targets, prioritized replay, shaped rewards)
    "SP-MADDQN": (True, True, True),
    "SHERB-MADDQN": (True, False, True),
    "PER-MADDQN": (True, True, False),
    "MADDQN": (True, False, False),
    "SP-MADQN": (False, True, True),
    "MADQN": (False, False, False),
}


def config_for_algorithm(base: TrainConfig, algorithm: str) -> TrainConfig:
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {sorted(ALGORITHMS)}")
    double, per, shaped = ALGORITHMS[algorithm]
    cfg = TrainConfig(**{**base.__dict__})
    cfg.use_double = double
    cfg.use_per = per
    cfg.use_shaped = shaped
    return cfg


def td_targets(rewards, flags, next_obs, next_masks, online: MLP, target: MLP,
               gamma: float, double: bool) -> np.ndarray:
    """Bootstrapped targets; terminal transitions use the reward alone.

    Double targets pick the next action with the online net and evaluate
    it with the target net, which can never exceed the plain max target.
    """
    q_target = target.forward(next_obs)
    if double:
        q_online = online.forward(next_obs)
        best = masked_argmax(q_online, next_masks)
        boot = q_target[np.arange(len(best)), best]
        boot = np.where(np.any(next_masks, axis=-1), boot, 0.0)
    else:
        boot = masked_max(q_target, next_masks)
    return rewards + gamma * np.where(flags, 0.0, boot)


def loss_and_gradient(net: MLP, obs, actions, targets, is_weights):
    """Importance-weighted MSE between taken-action values and targets.

    Returns the loss, the flat parameter gradient, and per-sample TD
    errors for priority updates.
    """
    q, cache = net.forward_cached(obs)
    batch = len(actions)
    rows = np.arange(batch)
    td = q[rows, actions] - targets
    loss = float(np.mean(is_weights * td * td))
    dq = np.zeros_like(q)
    dq[rows, actions] = 2.0 * is_weights * td / batch
    grad = net.backward(cache, dq)
    return loss, grad, td


@dataclass
class Agent:
    """Per-UAV learner owning its networks, buffer, and random stream."""

    uav_id: int
    obs_dim: int
    n_actions: int
    config: TrainConfig
    rng: np.random.Generator
    online: MLP = field(init=False)
    target: MLP = field(init=False)

    def __post_init__(self):
        dtype = np.dtype(self.config.dtype)
        sizes = (self.obs_dim, *self.config.hidden_sizes, self.n_actions)
        self.online = MLP(sizes, rng=self.rng, dtype=dtype)
        self.target = self.online.clone()
        if self.config.optimizer == "adam":
            self.opt = Adam(self.config.learning_rate, self.online.n_params, dtype=dtype)
        else:
            self.opt = Sgd(self.config.learning_rate)
        buffer_cls = PrioritizedReplay if self.config.use_per else ReplayBuffer
        kwargs = {"alpha": self.config.per_alpha} if self.config.use_per else {}
        self.buffer = buffer_cls(self.config.buffer_capacity, self.obs_dim,
                                 self.n_actions, dtype=dtype, **kwargs)
        self.train_steps = 0
        self.losses: list[float] = []

    def act(self, obs: np.ndarray, mask: np.ndarray, epsilon: float) -> int:
        """Masked epsilon-greedy selection for one demand."""
        valid = np.flatnonzero(mask)
        if valid.size == 0:
            raise ValueError("no valid action; caller should hold the demand")
        if epsilon > 0.0 and self.rng.random() < epsilon:
            return int(valid[self.rng.integers(0, valid.size)])
        q = self.online.forward(obs)
        return int(masked_argmax(q[None, :], mask[None, :])[0])

    def remember(self, obs, action, reward, next_obs, flag, next_mask) -> None:
        self.buffer.push(obs, action, reward, next_obs, flag, next_mask)

    def train_step(self, episode: int) -> float | None:
        """One gradient step on a sampled batch; None before warmup."""
        cfg = self.config
        if self.buffer.size <= cfg.batch_size:
            return None
        if cfg.use_per:
            batch = self.buffer.sample(cfg.batch_size, self.rng, beta=cfg.is_beta_at(episode))
        else:
            batch = self.buffer.sample(cfg.batch_size, self.rng)
        loss, grad, td = self._fused_loss(batch)
        if not np.isfinite(loss):
            raise TrainingDiverged(
                f"non-finite loss {loss} for agent {self.uav_id} at train step "
                f"{self.train_steps} (episode {episode}); |grad|={np.abs(grad).max()}")
        self.opt.step(self.online.params, grad)
        self.buffer.update_priorities(batch["indices"], td)
        self.train_steps += 1
        if self.train_steps % cfg.target_period == 0:
            soft_update(self.target, self.online, cfg.soft_tau)
        self.losses.append(loss)
        return loss

    def _fused_loss(self, batch: dict):
        """Target computation and gradient in one online-network pass.

        Stacking current and next observations into a single forward
        halves the matmul dispatch count; the backward pass then runs on
        the current-observation half of the cached activations.
        """
        cfg = self.config
        obs, next_obs = batch["obs"], batch["next_obs"]
        b = len(obs)
        stacked = np.concatenate([obs, next_obs], axis=0)
        q_all, cache = self.online.forward_cached(stacked)
        q_obs = q_all[:b]
        next_masks = batch["next_masks"]
        any_valid = np.any(next_masks, axis=-1)
        q_t = self.target.forward(next_obs)
        if cfg.use_double:
            best = masked_argmax(q_all[b:], next_masks)
            boot = q_t[np.arange(b), best]
        else:
            boot = np.max(np.where(next_masks, q_t, -1e30), axis=-1)
        boot = np.where(any_valid, boot, 0.0)
        targets = batch["rewards"] + cfg.gamma * np.where(batch["flags"], 0.0, boot)

        rows = np.arange(b)
        actions = batch["actions"]
        td = q_obs[rows, actions] - targets
        weights = batch["weights"]
        loss = float(np.mean(weights * td * td))
        dq = np.zeros_like(q_obs)
        dq[rows, actions] = 2.0 * weights * td / b
        half_cache = [a[:b] for a in cache]
        grad = self.online.backward(half_cache, dq)
        return loss, grad, td
