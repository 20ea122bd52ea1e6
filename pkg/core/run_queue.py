"""
Run queue for benchmark sweeps.
"""

import logging
from datetime import datetime
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

PENDING = 'pending'
SOLVED = 'solved'
TIMEOUT = 'timeout'
NO_SOLUTION = 'no-solution'
SKIPPED = 'skipped'
FAILED = 'failed'

RUN_STATUSES = (PENDING, SOLVED, TIMEOUT, NO_SOLUTION, SKIPPED, FAILED)


def make_run_id(map_name: str, scen_index: int, agents: int, algo: str) -> str:
    return f"{map_name}-s{scen_index}-k{agents}-{algo}"


class RunQueue:
    """Ordered (scenario, agent count, profile) runs with their outcome."""

    def __init__(self):
        self.runs: List[Dict[str, Any]] = []
        self.current_index: int = 0

    def add_run(self, map_name: str, scen_path: str, scen_index: int, agents: int,
                profile: Dict[str, Any]) -> str:
        """
        Append one run. ``profile`` holds the algorithm and its parameters.

        Returns:
            str: the run id
        """
        algo = profile['algo']
        run_id = make_run_id(map_name, scen_index, agents, profile.get('label', algo))
        self.runs.append({
            'run_id': run_id,
            'map': map_name,
            'scen_path': scen_path,
            'scen': scen_index,
            'agents': agents,
            'algo': algo,
            'profile': dict(profile),
            'status': PENDING,
            'error_message': None,
            'added_at': datetime.now(),
        })
        logger.debug(f"Queued run {run_id}")
        return run_id

    def __len__(self) -> int:
        return len(self.runs)

    def get_current_run(self) -> Optional[Dict[str, Any]]:
        if 0 <= self.current_index < len(self.runs):
            return self.runs[self.current_index].copy()
        return None

    def has_more_runs(self) -> bool:
        return self.current_index < len(self.runs)

    def mark_current(self, status: str, error_message: Optional[str] = None) -> bool:
        """
        Record the outcome of the current run and advance.

        Returns:
            bool: False if the queue is already complete
        """
        if status not in RUN_STATUSES or status == PENDING:
            raise ValueError(f"invalid run status '{status}'")
        if not self.has_more_runs():
            return False

        run = self.runs[self.current_index]
        run['status'] = status
        run['error_message'] = error_message
        if status == FAILED:
            logger.error(f"Run {run['run_id']} failed: {error_message}")
        elif status == SKIPPED:
            logger.warning(f"Run {run['run_id']} skipped: {error_message}")
        else:
            logger.info(f"Run {run['run_id']}: {status}")
        self.current_index += 1
        return True

    def mark_run(self, run_id: str, status: str, error_message: Optional[str] = None) -> bool:
        """Record an outcome out of order, for runs executed concurrently."""
        for index, run in enumerate(self.runs):
            if run['run_id'] == run_id:
                self.current_index = index
                self.mark_current(status, error_message)
                self.current_index = self._first_pending()
                return True
        return False

    def _first_pending(self) -> int:
        for index, run in enumerate(self.runs):
            if run['status'] == PENDING:
                return index
        return len(self.runs)

    def get_all_runs(self) -> List[Dict[str, Any]]:
        return [run.copy() for run in self.runs]

    def get_summary(self) -> Dict[str, Any]:
        counts = {status: 0 for status in RUN_STATUSES}
        for run in self.runs:
            counts[run['status']] += 1
        attempted = len(self.runs) - counts[PENDING] - counts[SKIPPED]
        return {
            'total_runs': len(self.runs),
            **{status.replace('-', '_'): n for status, n in counts.items()},
            'is_complete': counts[PENDING] == 0,
            'success_rate': counts[SOLVED] / attempted * 100 if attempted else 0.0,
        }
