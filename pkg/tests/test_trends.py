"""
Trend checks between anytime versions on an empty 16x16 map.

These are comparisons across many instances, not per-instance dominance, and
they run with a 10 s budget per run.
"""

import pytest

from core.anytime import ABCBS, AECBS, RESTART_EVERY, RESTART_NEVER, AnytimeConfig, run_anytime
from tests.conftest import random_instance

TREND_INSTANCES = 30
TREND_BUDGET = 10.0

pytestmark = pytest.mark.slow


def _share(pairs, better):
    return sum(1 for a, b in pairs if better(a, b)) / len(pairs)


@pytest.fixture(scope='module')
def trend_logs():
    """Per instance: logs of reused BCBS, naive BCBS and naive ECBS with eps0 2."""
    configs = {
        'abcbs-never': AnytimeConfig(algorithm=ABCBS, res=RESTART_NEVER, deadline=TREND_BUDGET),
        'abcbs-every': AnytimeConfig(algorithm=ABCBS, res=RESTART_EVERY, deadline=TREND_BUDGET),
        'aecbs-every': AnytimeConfig(algorithm=AECBS, eps0=2, res=RESTART_EVERY,
                                     deadline=TREND_BUDGET),
    }
    runs = []
    for seed in range(TREND_INSTANCES):
        instance = random_instance(500 + seed, width=16, height=16, agents=12 + seed % 9,
                                   obstacle_rate=0.0)
        runs.append({name: run_anytime(instance, cfg) for name, cfg in configs.items()})
    return runs


def test_never_restarting_bcbs_ends_with_tighter_bound(trend_logs):
    pairs = [(r['abcbs-never'].best_bound, r['abcbs-every'].best_bound) for r in trend_logs]
    assert _share(pairs, lambda reused, naive: reused is not None
                  and (naive is None or reused <= naive)) >= 0.6


def test_naive_ecbs_is_first_to_a_solution(trend_logs):
    pairs = [(r['aecbs-every'].events, r['abcbs-never'].events) for r in trend_logs]
    assert _share(pairs, lambda ecbs, bcbs: bool(ecbs)
                  and (not bcbs or ecbs[0].t_ms <= bcbs[0].t_ms)) >= 0.7


def test_naive_ecbs_ends_at_least_as_cheap(trend_logs):
    pairs = [(r['aecbs-every'].best_cost, r['abcbs-never'].best_cost) for r in trend_logs]
    assert _share(pairs, lambda ecbs, bcbs: ecbs is not None
                  and (bcbs is None or ecbs <= bcbs)) >= 0.6
