"""
Aggregation of run records into bound-over-relative-time curves and summary tables.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config.constants import (DEFAULT_SAMPLE_COUNT, DEFAULT_TIME_LIMIT,
                              MIN_SAMPLE_TIME_MS)
from core.anytime import OPTIMAL_PROVEN
from core.errors import ContractViolation
from core.run_queue import SKIPPED
from reports.event_log import RunRecord

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ['map', 'agents', 'algo', 'params', 't_rel_ms', 'mean_bound', 'n_scenarios']

CurveKey = Tuple[str, int, str, str]


def params_label(params: Dict) -> str:
    """Canonical ``k=v;k=v`` rendering of a parameter set, keys sorted."""
    return ';'.join(f"{k}={params[k]}" for k in sorted(params))


def curve_key(record: RunRecord) -> CurveKey:
    return (record.map, record.agents, record.algo, params_label(record.params))


@dataclass(frozen=True)
class CurvePoint:
    t_rel_ms: float
    mean_bound: float


@dataclass
class Curve:
    map: str
    agents: int
    algo: str
    params: str
    points: List[CurvePoint] = field(default_factory=list)
    n_scenarios: int = 0

    @property
    def is_empty(self) -> bool:
        return self.n_scenarios == 0

    @property
    def label(self) -> str:
        return f"{self.algo} ({self.params})" if self.params else self.algo

    def times(self) -> np.ndarray:
        return np.array([p.t_rel_ms for p in self.points], dtype=float)

    def values(self) -> np.ndarray:
        return np.array([p.mean_bound for p in self.points], dtype=float)


def default_sample_times(budget_ms: float = DEFAULT_TIME_LIMIT * 1000.0,
                         count: int = DEFAULT_SAMPLE_COUNT) -> List[float]:
    """Zero followed by log-spaced points up to ``budget_ms``; ``count`` points in total."""
    if count < 2:
        return [0.0]
    budget_ms = max(budget_ms, MIN_SAMPLE_TIME_MS * 2)
    grid = np.geomspace(MIN_SAMPLE_TIME_MS, budget_ms, count - 1)
    return [0.0] + grid.tolist()


def bound_trace(record: RunRecord) -> Tuple[np.ndarray, np.ndarray]:
    """Relative times (first solution at 0) and best-so-far bounds of one run."""
    t = np.array([e.t_ms for e in record.events], dtype=float)
    bounds = np.array([e.epsilon_bound for e in record.events], dtype=float)
    return t - t[0], np.minimum.accumulate(bounds)


def sample_trace(rel_times: np.ndarray, bounds: np.ndarray,
                 sample_times: np.ndarray) -> np.ndarray:
    """Best bound at each sample time; NaN before the first solution."""
    idx = np.searchsorted(rel_times, sample_times, side='right') - 1
    out = np.full(len(sample_times), np.nan)
    valid = idx >= 0
    out[valid] = bounds[idx[valid]]
    return out


def aggregate_curves(records: Iterable[RunRecord],
                     sample_times: Optional[Sequence[float]] = None) -> List[Curve]:
    """
    Mean best-so-far bound over time since each scenario's first solution, per
    (map, agents, algo, params). Runs without any solution are left out of the
    mean; a group with none left gets an empty curve.
    """
    samples = np.asarray(default_sample_times() if sample_times is None else sample_times,
                         dtype=float)
    if samples.size and np.any(np.diff(samples) < 0):
        raise ContractViolation("sample times must be nondecreasing")

    groups: Dict[CurveKey, List[RunRecord]] = {}
    for record in records:
        if record.final_status == SKIPPED:
            continue
        groups.setdefault(curve_key(record), []).append(record)

    curves = []
    for key in sorted(groups):
        qualifying = sorted((r for r in groups[key] if r.solved),
                            key=lambda r: (r.scen, r.run_id))
        curve = Curve(*key, n_scenarios=len(qualifying))
        if qualifying:
            stacked = np.vstack([sample_trace(*bound_trace(r), samples) for r in qualifying])
            means = np.nanmean(stacked, axis=0)
            curve.points = [CurvePoint(float(t), float(m)) for t, m in zip(samples, means)]
        else:
            logger.warning(f"No run of {key} found a solution; curve is empty")
        curves.append(curve)
    return curves


def curves_frame(curves: Iterable[Curve]) -> pd.DataFrame:
    rows = []
    for curve in curves:
        base = {'map': curve.map, 'agents': curve.agents, 'algo': curve.algo,
                'params': curve.params}
        if curve.is_empty:
            rows.append({**base, 't_rel_ms': np.nan, 'mean_bound': np.nan, 'n_scenarios': 0})
        for p in curve.points:
            rows.append({**base, 't_rel_ms': p.t_rel_ms, 'mean_bound': p.mean_bound,
                         'n_scenarios': curve.n_scenarios})
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def write_curves_csv(curves: Iterable[Curve], file_path: Union[str, Path]) -> bool:
    try:
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        curves_frame(curves).to_csv(file_path, index=False)
        logger.info(f"Wrote curves to {file_path}")
        return True
    except OSError as e:
        logger.error(f"Error writing curves CSV {file_path}: {e}")
        return False


def summarize_runs(records: Iterable[RunRecord]) -> pd.DataFrame:
    """
    Per configuration: run count, success rate, first-solution time, final bound,
    share of runs proven optimal and mean high-level expansions. Skipped runs
    are not counted.
    """
    rows = []
    for r in records:
        if r.final_status == SKIPPED:
            continue
        first = r.events[0] if r.events else None
        last = r.events[-1] if r.events else None
        rows.append({
            'map': r.map, 'agents': r.agents, 'algo': r.algo,
            'params': params_label(r.params),
            'solved': r.solved,
            'first_ms': first.t_ms if first else np.nan,
            'final_bound': last.epsilon_bound if last else np.nan,
            'final_cost': last.cost if last else np.nan,
            'optimal': r.final_status == OPTIMAL_PROVEN,
            'hl_expansions': last.hl_expansions if last else np.nan,
        })
    columns = ['map', 'agents', 'algo', 'params', 'runs', 'success_rate',
               'mean_first_ms', 'median_first_ms', 'mean_final_bound',
               'optimal_fraction', 'mean_hl_expansions']
    if not rows:
        return pd.DataFrame(columns=columns)

    df = pd.DataFrame(rows)
    summary = df.groupby(['map', 'agents', 'algo', 'params'], sort=True).agg(
        runs=('solved', 'size'),
        success_rate=('solved', 'mean'),
        mean_first_ms=('first_ms', 'mean'),
        median_first_ms=('first_ms', 'median'),
        mean_final_bound=('final_bound', 'mean'),
        optimal_fraction=('optimal', 'mean'),
        mean_hl_expansions=('hl_expansions', 'mean'),
    ).reset_index()
    return summary[columns]


def write_summary_csv(summary: pd.DataFrame, file_path: Union[str, Path]) -> bool:
    try:
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        summary.to_csv(file_path, index=False, float_format='%.6g')
        logger.info(f"Wrote run summary ({len(summary)} configurations) to {file_path}")
        return True
    except OSError as e:
        logger.error(f"Error writing summary CSV {file_path}: {e}")
        return False
