"""Scenario sweeps: cartesian grids of runs, aggregated into CSV rows.

Each scenario expands to an ordered task list (sweep-major, seed-minor)
that executes either inline or on a process pool; collection preserves
task order, so output files are byte-identical across reruns and worker
counts.
"""

from __future__ import annotations

import os
from dataclasses import replace
from multiprocessing import get_context

import numpy as np

from ..learner import evaluate_policy, run_training
from ..trust import WeightKind
from .config import ExperimentConfig
from .csvio import write_csv
from .seeds import subsystem_seed
from .trustsim import trial_detection_slots

UNDETECTED = -1  # sentinel in detection CSVs; analysis maps it to +inf


# -- generic pool plumbing ----------------------------------------------

def _pool_init():
    os.environ["OMP_NUM_THREADS"] = "1"
    os.environ["OPENBLAS_NUM_THREADS"] = "1"


def _run_tasks(fn, tasks: list, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    ctx = get_context("fork")
    chunk = max(1, len(tasks) // (workers * 8))
    with ctx.Pool(workers, initializer=_pool_init) as pool:
        return pool.map(fn, tasks, chunksize=chunk)


# -- trust scenarios ------------------------------------------------------

def _detection_task(args) -> int:
    cfg, scheme, master_seed, seed = args
    slots = trial_detection_slots(cfg, scheme,
                                  subsystem_seed(master_seed, "trust", seed))
    return UNDETECTED if slots is None else slots


DETECTION_HEADER = ["scenario", "scheme", "p1", "p2", "p3", "thr", "seed",
                    "detection_slots"]


def run_trust_detection(config: ExperimentConfig):
    sweep = config.sweep
    triples = [tuple(t) for t in sweep.get("p_triples", [config.trust_scenario.profile])]
    schemes = [WeightKind(s) for s in sweep.get("schemes",
                                                ["adaptive", "average", "random"])]
    tasks, keys = [], []
    for triple in triples:
        for scheme in schemes:
            cfg = replace(config.trust_scenario, profile=triple)
            for seed in range(config.n_seeds):
                tasks.append((cfg, scheme, config.master_seed, seed))
                keys.append((scheme.value, triple, seed))
    results = _run_tasks(_detection_task, tasks, config.workers)
    rows = [
        ("trust_detection", scheme, t[0], t[1], t[2],
         config.trust_scenario.trust_threshold, seed, slots)
        for (scheme, t, seed), slots in zip(keys, results)
    ]
    return DETECTION_HEADER, rows


def run_trust_threshold(config: ExperimentConfig):
    sweep = config.sweep
    thresholds = sweep.get("thresholds", [0.6, 0.7, 0.8, 0.9])
    schemes = [WeightKind(s) for s in sweep.get("schemes",
                                                ["adaptive", "average", "random"])]
    triple = tuple(sweep.get("p_triples", [(0.5, 0.5, 0.5)])[0])
    tasks, keys = [], []
    for thr in thresholds:
        for scheme in schemes:
            cfg = replace(config.trust_scenario, profile=triple, trust_threshold=thr)
            for seed in range(config.n_seeds):
                tasks.append((cfg, scheme, config.master_seed, seed))
                keys.append((scheme.value, thr, seed))
    results = _run_tasks(_detection_task, tasks, config.workers)
    rows = [
        ("trust_threshold", scheme, triple[0], triple[1], triple[2], thr, seed, slots)
        for (scheme, thr, seed), slots in zip(keys, results)
    ]
    return DETECTION_HEADER, rows


# -- learning scenarios ----------------------------------------------------

CURVES_HEADER = ["scenario", "algorithm", "learning_rate", "n_demands", "seed",
                 "episode", "reward_sum", "mean_loss", "epsilon"]


def _convergence_task(args):
    env_cfg, train_cfg, algorithm, master_seed = args
    result = run_training(env_cfg, algorithm, train_cfg, master_seed)
    return [(c.episode, c.reward_sum, c.mean_loss, c.epsilon) for c in result.curves]


def run_training_convergence(config: ExperimentConfig):
    sweep = config.sweep
    algorithms = sweep.get("algorithms", ["SP-MADDQN"])
    rates = sweep.get("learning_rates", [config.train.learning_rate])
    demand_counts = sweep.get("n_demands", [config.env.n_demands])
    tasks, keys = [], []
    for algorithm in algorithms:
        for lr in rates:
            for nd in demand_counts:
                env_cfg = replace(config.env, n_demands=nd)
                train_cfg = replace(config.train, learning_rate=lr)
                for seed in range(config.n_seeds):
                    tasks.append((env_cfg, train_cfg, algorithm,
                                  config.master_seed + seed))
                    keys.append((algorithm, lr, nd, seed))
    results = _run_tasks(_convergence_task, tasks, config.workers)
    rows = []
    for (algorithm, lr, nd, seed), curve in zip(keys, results):
        for episode, reward, loss, eps in curve:
            rows.append(("training_convergence", algorithm, lr, nd, seed,
                         episode, reward, loss, eps))
    return CURVES_HEADER, rows


SUMMARY_HEADER = ["scenario", "algorithm", "varsigma", "n_uavs", "n_malicious",
                  "n_demands", "seed", "tsr", "mean_e2e_s", "objective", "reward_sum"]

_NAN4 = (float("nan"),) * 4


def _train_eval_task(args):
    """Train-then-evaluate; a diverging run yields nan rows, not silence."""
    env_cfg, train_cfg, algorithm, master_seed, eval_episodes = args
    try:
        result = run_training(env_cfg, algorithm, train_cfg, master_seed)
        metrics = evaluate_policy(env_cfg, result.agents, master_seed, eval_episodes)
        return [(m.tsr, m.mean_e2e_s, m.objective, m.reward_sum) for m in metrics]
    except Exception as exc:
        import sys
        print(f"task ({algorithm}, seed {master_seed}) failed: {exc}", file=sys.stderr)
        return [_NAN4] * eval_episodes


def run_sigma_sensitivity(config: ExperimentConfig):
    sweep = config.sweep
    sigmas = sweep.get("varsigma", [0.0, 0.2, 2.0, 20.0])
    uav_counts = sweep.get("n_uavs", [config.env.topology.n_uav])
    train_eps = int(sweep.get("train_episodes", config.train.episodes))
    eval_eps = int(sweep.get("eval_episodes", 10))
    tasks, keys = [], []
    for sigma in sigmas:
        for nu in uav_counts:
            env_cfg = replace(config.env, varsigma=max(sigma, 1e-9),
                              topology=replace(config.env.topology, n_uav=nu))
            train_cfg = replace(config.train, episodes=train_eps)
            for seed in range(config.n_seeds):
                tasks.append((env_cfg, train_cfg, "SP-MADDQN",
                              config.master_seed + seed, eval_eps))
                keys.append((sigma, nu, seed))
    results = _run_tasks(_train_eval_task, tasks, config.workers)
    rows = []
    for (sigma, nu, seed), metrics in zip(keys, results):
        tsr = float(np.mean([m[0] for m in metrics]))
        e2e = float(np.nanmean([m[1] for m in metrics]))
        reward = float(np.mean([m[3] for m in metrics]))
        rows.append(("sigma_sensitivity", "SP-MADDQN", sigma, nu,
                     config.env.n_malicious, config.env.n_demands, seed,
                     tsr, e2e, tsr / e2e if e2e > 0 else float("nan"), reward))
    return SUMMARY_HEADER, rows


def run_algo_comparison(config: ExperimentConfig):
    sweep = config.sweep
    algorithms = sweep.get("algorithms", ["SP-MADDQN", "SP-MADQN", "SHERB-MADDQN",
                                          "PER-MADDQN", "MADDQN", "MADQN"])
    demand_counts = sweep.get("n_demands", [config.env.n_demands])
    train_eps = int(sweep.get("train_episodes", config.train.episodes))
    eval_eps = int(sweep.get("eval_episodes", 10))
    tasks, keys = [], []
    for algorithm in algorithms:
        for nd in demand_counts:
            env_cfg = replace(config.env, n_demands=nd)
            train_cfg = replace(config.train, episodes=train_eps)
            for seed in range(config.n_seeds):
                tasks.append((env_cfg, train_cfg, algorithm,
                              config.master_seed + seed, eval_eps))
                keys.append((algorithm, nd, seed))
    results = _run_tasks(_train_eval_task, tasks, config.workers)
    rows = []
    for (algorithm, nd, seed), metrics in zip(keys, results):
        tsr = float(np.mean([m[0] for m in metrics]))
        e2e = float(np.nanmean([m[1] for m in metrics]))
        reward = float(np.mean([m[3] for m in metrics]))
        rows.append(("algo_comparison", algorithm, config.env.varsigma,
                     config.env.topology.n_uav, config.env.n_malicious, nd, seed,
                     tsr, e2e, tsr / e2e if e2e > 0 else float("nan"), reward))
    return SUMMARY_HEADER, rows


def _scale_task(args):
    env_cfg, train_cfg, master_seed, grid, eval_eps = args
    result = run_training(env_cfg, "SP-MADDQN", train_cfg, master_seed)
    out = []
    for nd, nm in grid:
        eval_cfg = replace(env_cfg, n_demands=nd, n_malicious=nm)
        metrics = evaluate_policy(eval_cfg, result.agents, master_seed, eval_eps)
        for ep, m in enumerate(metrics):
            out.append((nd, nm, ep, m.tsr, m.mean_e2e_s, m.objective, m.reward_sum))
    return out


def run_scale_sweep(config: ExperimentConfig):
    """Train one policy set per fleet size, then score it across the grid."""
    sweep = config.sweep
    uav_counts = sweep.get("n_uavs", [config.env.topology.n_uav])
    demand_counts = sweep.get("n_demands", [config.env.n_demands])
    malicious_counts = sweep.get("n_malicious", [config.env.n_malicious])
    train_eps = int(sweep.get("train_episodes", config.train.episodes))
    eval_eps = int(sweep.get("eval_episodes", 30))
    grid = [(nd, nm) for nd in demand_counts for nm in malicious_counts]
    tasks, keys = [], []
    for nu in uav_counts:
        env_cfg = replace(config.env, topology=replace(config.env.topology, n_uav=nu))
        train_cfg = replace(config.train, episodes=train_eps)
        tasks.append((env_cfg, train_cfg, config.master_seed, grid, eval_eps))
        keys.append(nu)
    results = _run_tasks(_scale_task, tasks, config.workers)
    rows = []
    for nu, entries in zip(keys, results):
        for nd, nm, ep, tsr, e2e, objective, reward in entries:
            rows.append(("scale_sweep", "SP-MADDQN", config.env.varsigma, nu, nm,
                         nd, ep, tsr, e2e, objective, reward))
    return SUMMARY_HEADER, rows


RUNNERS = {
    "trust_detection": run_trust_detection,
    "trust_threshold": run_trust_threshold,
    "training_convergence": run_training_convergence,
    "sigma_sensitivity": run_sigma_sensitivity,
    "algo_comparison": run_algo_comparison,
    "scale_sweep": run_scale_sweep,
}


def run_scenario(config: ExperimentConfig, output_dir) -> str:
    """Execute one scenario sweep and write its CSV; returns the path."""
    header, rows = RUNNERS[config.scenario](config)
    path = os.path.join(output_dir, f"{config.scenario}.csv")
    write_csv(path, header, rows)
    return path
