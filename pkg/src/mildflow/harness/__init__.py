"""Configuration, persistence and the command-line surface."""
from .config import ExperimentConfig, load_config, parse_config
from .initial import make_initial_data
from .runner import RunRecord, run_experiment
