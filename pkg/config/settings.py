"""
Resolved bench settings.
"""

import os
from dataclasses import dataclass
from typing import Optional

from config.config_manager import ConfigManager
from config.constants import BENCH_DIR_ENV_VAR


@dataclass
class SolverSettings:
    """Where the bench sweep finds its scenarios."""
    benchmark_dir: Optional[str] = None

    @classmethod
    def from_environment(cls, config: Optional[ConfigManager] = None,
                         bench_dir: Optional[str] = None) -> 'SolverSettings':
        """Benchmark directory precedence: explicit value, environment variable, config file."""
        resolved = bench_dir or os.environ.get(BENCH_DIR_ENV_VAR) or None
        if resolved is None and config is not None:
            resolved = config.benchmark_dir
        return cls(benchmark_dir=resolved)
