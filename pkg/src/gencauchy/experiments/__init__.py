"""Simulation experiments, their configuration and the command line interface."""

from .config import ExperimentConfig, build_config, format_model, parse_model, read_config_file
from .harness import (RUNNERS, ExperimentReport, run_equiv, run_fit, run_predict,
                      run_simulate, run_table1, run_table2)
