"""Experience replay: uniform ring buffer and proportional prioritized replay.

Transitions are stored column-wise in preallocated arrays.  The
prioritized buffer keeps priorities in a sum tree; new transitions
enter at the running maximum priority and sampling is stratified over
the cumulative mass.
"""

from __future__ import annotations

import numpy as np

from .backend import SumTree

PRIORITY_FLOOR = 1e-6


class ReplayBuffer:
    """Uniform replay over a fixed-capacity ring; oldest entries evicted first."""

    def __init__(self, capacity: int, obs_dim: int, n_actions: int, dtype=np.float64):
        self.capacity = capacity
        self.size = 0
        self._head = 0
        self.obs = np.zeros((capacity, obs_dim), dtype=dtype)
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.rewards = np.zeros(capacity, dtype=dtype)
        self.next_obs = np.zeros((capacity, obs_dim), dtype=dtype)
        self.flags = np.zeros(capacity, dtype=bool)
        self.next_masks = np.zeros((capacity, n_actions), dtype=bool)

    def push(self, obs, action, reward, next_obs, flag, next_mask) -> int:
        idx = self._head
        self.obs[idx] = obs
        self.actions[idx] = action
        self.rewards[idx] = reward
        self.next_obs[idx] = next_obs
        self.flags[idx] = flag
        self.next_masks[idx] = next_mask
        self._head = (self._head + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)
        return idx

    def _gather(self, idx: np.ndarray) -> dict:
        return {
            "obs": self.obs[idx],
            "actions": self.actions[idx],
            "rewards": self.rewards[idx],
            "next_obs": self.next_obs[idx],
            "flags": self.flags[idx],
            "next_masks": self.next_masks[idx],
            "indices": idx,
        }

    def sample(self, batch: int, rng: np.random.Generator) -> dict:
        if self.size == 0:
            raise ValueError("cannot sample from an empty buffer")
        idx = rng.integers(0, self.size, size=batch)
        out = self._gather(idx)
        out["weights"] = np.ones(batch, dtype=self.obs.dtype)
        return out

    def update_priorities(self, indices, td_errors) -> None:
        pass  # uniform replay has no priorities


class PrioritizedReplay(ReplayBuffer):
    """Proportional prioritized replay with importance-sampling weights."""

    def __init__(self, capacity: int, obs_dim: int, n_actions: int,
                 alpha: float = 0.6, dtype=np.float64):
        super().__init__(capacity, obs_dim, n_actions, dtype=dtype)
        self.alpha = alpha
        self.tree = SumTree(capacity)
        self.max_priority = 1.0

    def push(self, obs, action, reward, next_obs, flag, next_mask) -> int:
        idx = super().push(obs, action, reward, next_obs, flag, next_mask)
        self.tree.set_many(np.array([idx]), np.array([self.max_priority ** self.alpha]))
        return idx

    def sample(self, batch: int, rng: np.random.Generator, beta: float = 1.0) -> dict:
        if self.size == 0:
            raise ValueError("cannot sample from an empty buffer")
        total = self.tree.total()
        segment = total / batch
        targets = (np.arange(batch) + rng.random(batch)) * segment
        idx = self.tree.sample(targets)
        idx = np.minimum(idx, self.size - 1)
        out = self._gather(idx)
        probs = self.tree.get(idx) / total
        weights = (self.size * probs) ** (-beta)
        weights /= weights.max()
        out["weights"] = weights.astype(self.obs.dtype)
        return out

    def update_priorities(self, indices, td_errors) -> None:
        raw = np.maximum(np.abs(np.asarray(td_errors, dtype=np.float64)), PRIORITY_FLOOR)
        self.max_priority = max(self.max_priority, float(raw.max()))
        self.tree.set_many(np.asarray(indices, dtype=np.int64), raw ** self.alpha)
