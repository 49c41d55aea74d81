"""Pure-numpy sum tree (prefix-sum sampling structure) fallback.

Implicit 1-indexed binary tree over a power-of-two leaf array.  Parents
are always recomputed as the sum of their children, never incrementally
adjusted, so any update order yields the same floats as the compiled
backend.
"""

from __future__ import annotations

import numpy as np


def _next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p <<= 1
    return p


class SumTree:
    backend = "python"

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._leaves = _next_pow2(capacity)
        self._tree = np.zeros(2 * self._leaves, dtype=np.float64)
        self._depth = int(np.log2(self._leaves))

    def total(self) -> float:
        return float(self._tree[1])

    def get(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        return self._tree[self._leaves + idx].copy()

    def set_many(self, indices, values) -> None:
        idx = np.asarray(indices, dtype=np.int64)
        vals = np.asarray(values, dtype=np.float64)
        if np.any(idx < 0) or np.any(idx >= self.capacity):
            raise IndexError("leaf index out of range")
        nodes = self._leaves + idx
        self._tree[nodes] = vals
        parents = np.unique(nodes >> 1)
        while parents[0] >= 1:
            self._tree[parents] = self._tree[2 * parents] + self._tree[2 * parents + 1]
            if parents[0] == 1:
                break
            parents = np.unique(parents >> 1)

    def sample(self, targets) -> np.ndarray:
        """Descend the tree for each prefix-sum target, returning leaf indices."""
        v = np.asarray(targets, dtype=np.float64).copy()
        idx = np.ones(len(v), dtype=np.int64)
        for _ in range(self._depth):
            left = 2 * idx
            left_sums = self._tree[left]
            go_left = v <= left_sums
            idx = np.where(go_left, left, left + 1)
            v = np.where(go_left, v, v - left_sums)
        leaf = idx - self._leaves
        return np.minimum(leaf, self.capacity - 1)
