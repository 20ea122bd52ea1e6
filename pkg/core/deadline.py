"""
Wall-clock budget shared by the searches of one run.
"""

import time
from dataclasses import dataclass, field
from typing import Optional

from core.errors import SearchTimeout


@dataclass
class Deadline:
    """
    Time limit manager. ``time_limit`` is in seconds; ``None`` never expires.
    """
    time_limit: Optional[float] = None
    start_time: float = field(default_factory=time.perf_counter)

    @property
    def elapsed(self) -> float:
        """Seconds since the deadline was created."""
        return time.perf_counter() - self.start_time

    @property
    def elapsed_ms(self) -> float:
        return self.elapsed * 1000.0

    @property
    def is_expired(self) -> bool:
        return self.time_limit is not None and self.elapsed > self.time_limit

    def check(self) -> None:
        if self.is_expired:
            raise SearchTimeout(f"time limit of {self.time_limit:.3f}s exceeded")
