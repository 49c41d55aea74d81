from .config import SCENARIOS, ConfigError, ExperimentConfig, load_config, parse_config
from .csvio import read_csv, write_csv
from .scenarios import RUNNERS, run_scenario
from .seeds import subsystem_rng, subsystem_seed
from .trustsim import TrustScenarioConfig, run_trust_trial, trial_detection_slots

__all__ = [
    "SCENARIOS", "ConfigError", "ExperimentConfig", "load_config", "parse_config",
    "read_csv", "write_csv", "RUNNERS", "run_scenario", "subsystem_rng",
    "subsystem_seed", "TrustScenarioConfig", "run_trust_trial",
    "trial_detection_slots",
]
