"""Benchmark the compiled sum-tree core against the numpy fallback.

Measures the replay hot path in isolation (priority updates plus
prefix-sum sampling at training batch sizes) and a short end-to-end
training run under each backend.

Run:
    python benchmarks/bench_backends.py
"""

from __future__ import annotations

import os
import subprocess
import sys
import time

import numpy as np


def bench_tree(tree_cls, capacity=100_000, rounds=2_000, batch=64) -> float:
    rng = np.random.default_rng(0)
    tree = tree_cls(capacity)
    tree.set_many(np.arange(capacity), rng.uniform(0.1, 2.0, capacity))
    start = time.perf_counter()
    for _ in range(rounds):
        targets = rng.uniform(0, tree.total(), batch)
        idx = tree.sample(targets)
        tree.set_many(idx, rng.uniform(0.1, 2.0, batch))
    return time.perf_counter() - start


def bench_tree_backends() -> None:
    from lainsim.learner.sumtree_py import SumTree as PyTree

    print("sum-tree hot path: 2000 rounds of sample(64) + set_many(64), 100k leaves")
    py_s = bench_tree(PyTree)
    print(f"  python  {py_s * 1e3:8.1f} ms total  ({py_s / 2000 * 1e6:6.1f} us/round)")
    try:
        from lainsim.learner._sumtree import SumTree as CyTree
    except ImportError:
        print("  cython  unavailable (extension not built)")
        return
    cy_s = bench_tree(CyTree)
    print(f"  cython  {cy_s * 1e3:8.1f} ms total  ({cy_s / 2000 * 1e6:6.1f} us/round)")
    print(f"  speedup {py_s / cy_s:5.1f}x")


def bench_training(backend: str) -> float:
    """Run a short training in a subprocess pinned to one backend."""
    code = (
        "import os, time\n"
        "import numpy as np\n"
        "from lainsim.env import EnvConfig\n"
        "from lainsim.topology import TopologyConfig\n"
        "from lainsim.learner import TrainConfig, run_training\n"
        "env = EnvConfig(topology=TopologyConfig(area=(6000.0, 3000.0), d_max=3500.0,"
        " n_uav=8, n_sd=4, n_bs=2), queue_capacity=4, deadline_slots=8)\n"
        "tc = TrainConfig(episodes=30, steps_per_episode=12, dtype='float32')\n"
        "t0 = time.perf_counter()\n"
        "res = run_training(env, 'SP-MADDQN', tc, master_seed=1)\n"
        "print(time.perf_counter() - t0)\n"
        "print(res.curves[-1].reward_sum)\n"
    )
    env = dict(os.environ, LAINSIM_BACKEND=backend, OMP_NUM_THREADS="1",
               OPENBLAS_NUM_THREADS="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    seconds, reward = out.stdout.split()
    return float(seconds), float(reward)


def bench_training_backends() -> None:
    print("\nend-to-end: 30 episodes of SP-MADDQN, 8 agents, 25 demands")
    py_s, py_r = bench_training("python")
    print(f"  python  {py_s:6.1f} s   final episode reward {py_r:.4f}")
    try:
        cy_s, cy_r = bench_training("cython")
    except subprocess.CalledProcessError:
        print("  cython  unavailable")
        return
    print(f"  cython  {cy_s:6.1f} s   final episode reward {cy_r:.4f}")
    print(f"  speedup {py_s / cy_s:5.2f}x; rewards identical: {py_r == cy_r}")


if __name__ == "__main__":
    bench_tree_backends()
    bench_training_backends()
