from .agent import ALGORITHMS, Agent, TrainConfig, TrainingDiverged, config_for_algorithm
from .backend import BACKEND, SumTree
from .net import (MLP, Adam, Sgd, load_checkpoint, masked_argmax, masked_max,
                  save_checkpoint, soft_update)
from .replay import PrioritizedReplay, ReplayBuffer
from .train import EpisodeStats, TrainResult, evaluate_policy, run_training

__all__ = [
    "ALGORITHMS", "Agent", "TrainConfig", "TrainingDiverged", "config_for_algorithm",
    "BACKEND", "SumTree", "MLP", "Adam", "Sgd", "load_checkpoint", "masked_argmax",
    "masked_max", "save_checkpoint", "soft_update", "PrioritizedReplay", "ReplayBuffer",
    "EpisodeStats", "TrainResult", "evaluate_policy", "run_training",
]
