"""
The solve, bench, validate and plot commands. Each returns a process exit code.
"""

import logging
import re
import sys
import time
import traceback
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from config.config_manager import ConfigManager
from config.constants import (ANYTIME_ALGORITHMS, DEFAULT_CIC, DEFAULT_TIME_LIMIT, EXIT_DATA_ERROR,
                              EXIT_INVALID, EXIT_IO_ERROR, EXIT_NO_SOLUTION, EXIT_OK, EXIT_TIMEOUT,
                              EXIT_USAGE)
from config.settings import SolverSettings
from core.anytime import (NO_SOLUTION, OPTIMAL_PROVEN, AnytimeConfig, IncumbentEvent,
                          IncumbentLog, next_epsilon, run_anytime)
from core.conflicts import Solution
from core.errors import (MapFormatError, ScenarioExhausted, ScenarioFormatError,
                         SolutionFormatError, UnreachableGoal, UsageError)
from core.file_manager import (find_scenarios, load_map, load_scenario, read_solution,
                               write_solution)
from core.highlevel import SOLVED, TIMEOUT, bcbs_solve, cbs_solve, ecbs_solve
from core.instance import Instance, build_instance
from core import run_queue
from core.run_queue import RunQueue, make_run_id
from core.validate import ValidationReport, validate_solution
from reports.curves import (aggregate_curves, default_sample_times, summarize_runs,
                            write_curves_csv, write_summary_csv)
from reports.event_log import EventLogWriter, RunRecord, read_events, write_events
from utils.validators import (SolverParams, params_from_profile, validate_agent_range,
                              validate_solver_params)

logger = logging.getLogger(__name__)

# final status of a one-shot bounded search whose bound is not 1
SOLVED_BOUNDED = 'solved'

# which algorithms each solver flag applies to
_FLAG_ALGOS = {
    'eps0': {'bcbs', 'ecbs', 'abcbs', 'aecbs'},
    'eps_high': {'bcbs'},
    'eps_low': {'bcbs'},
    'res': set(ANYTIME_ALGORITHMS),
    'cic': {'aecbs'},
}

_SCEN_NUMBER = re.compile(r'(\d+)\.scen$')

_DATA_ERRORS = (MapFormatError, ScenarioFormatError, SolutionFormatError,
                ScenarioExhausted, UnreachableGoal)


class ValidatingSink:
    """Checks every incumbent before passing it on; invalid ones are held back."""

    def __init__(self, instance: Instance, inner=None):
        self.instance = instance
        self.inner = inner
        self.invalid_reports: List[ValidationReport] = []

    def on_incumbent(self, event: IncumbentEvent, solution: Solution) -> None:
        report = validate_solution(self.instance, solution, claimed_soc=event.cost)
        if not report.valid:
            logger.error(f"Incumbent of iteration {event.iteration} is invalid:\n"
                         f"{report.summary()}")
            self.invalid_reports.append(report)
            return
        if self.inner is not None:
            self.inner.on_incumbent(event, solution)

    def on_finish(self, log: IncumbentLog) -> None:
        if self.inner is not None:
            self.inner.on_finish(log)


def _one_shot(instance: Instance, params: SolverParams, sink) -> IncumbentLog:
    time_limit = params.time_limit or DEFAULT_TIME_LIMIT
    if params.algo == 'cbs':
        result = cbs_solve(instance, time_limit)
    elif params.algo == 'bcbs':
        result = bcbs_solve(instance, params.eps_high, params.eps_low, time_limit)
    else:
        result = ecbs_solve(instance, params.eps0, time_limit)

    log = IncumbentLog(iterations=1, epsilons=[params.eps0])
    if result.status == SOLVED:
        lb = result.lb_at_return or 0
        bound = Fraction(result.cost, lb) if lb else Fraction(1)
        event = IncumbentEvent(iteration=1, t_ms=result.elapsed * 1000.0,
                               epsilon_bound=float(bound), cost=result.cost, lb=lb,
                               hl_expansions=result.hl_expanded,
                               ll_expansions=result.ll_expanded)
        log.events.append(event)
        log.best_solution = result.solution
        if sink is not None:
            sink.on_incumbent(event, result.solution)
        log.final_status = (OPTIMAL_PROVEN if next_epsilon(result.cost, lb) is None
                            else SOLVED_BOUNDED)
    else:
        log.timed_out = result.status == TIMEOUT
        log.final_status = NO_SOLUTION
    if sink is not None:
        sink.on_finish(log)
    return log


def solve_instance(instance: Instance, params: SolverParams, sink=None) -> IncumbentLog:
    """Run one configured solver; one-shot solvers report a single incumbent."""
    if params.is_anytime:
        cfg = AnytimeConfig(algorithm=params.algo, eps0=params.eps0, res=params.res,
                            cic=DEFAULT_CIC if params.cic is None else params.cic,
                            deadline=params.time_limit or DEFAULT_TIME_LIMIT)
        return run_anytime(instance, cfg, sink)
    return _one_shot(instance, params, sink)


def exit_code_for(log: IncumbentLog) -> int:
    if log.events:
        return EXIT_OK
    return EXIT_TIMEOUT if log.timed_out else EXIT_NO_SOLUTION


def scenario_index(path, fallback: int = 0) -> int:
    """Trailing number of a ``...-<n>.scen`` file name."""
    match = _SCEN_NUMBER.search(Path(path).name)
    return int(match.group(1)) if match else fallback


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _load_instance(map_path: str, scen_path: str, k: int) -> Tuple[Optional[Instance], int]:
    """Instance plus an exit code; the code is EXIT_OK when loading worked."""
    try:
        grid = load_map(map_path)
        scen = load_scenario(scen_path)
        return build_instance(grid, scen, k), EXIT_OK
    except FileNotFoundError as e:
        _error(f"file not found: {e.filename}")
        return None, EXIT_USAGE
    except _DATA_ERRORS as e:
        _error(str(e))
        return None, EXIT_DATA_ERROR
    except (OSError, ValueError) as e:
        _error(str(e))
        return None, EXIT_DATA_ERROR


def run_solve(args) -> int:
    try:
        params = validate_solver_params(args.algo, eps0=args.eps0, eps_high=args.eps_high,
                                        eps_low=args.eps_low, res=args.res, cic=args.cic,
                                        time_limit=args.time_limit)
    except UsageError as e:
        _error(str(e))
        return EXIT_USAGE

    instance, code = _load_instance(args.map, args.scen, args.agents)
    if instance is None:
        return code

    map_name = Path(args.map).stem
    scen = scenario_index(args.scen)
    record = RunRecord(run_id=make_run_id(map_name, scen, args.agents, params.algo),
                       map=map_name, scen=scen, agents=args.agents, algo=params.algo,
                       params=params.as_dict())
    writer = None
    sink = None
    try:
        if args.events_out:
            writer = EventLogWriter(args.events_out)
            sink = writer.sink_for(record)
        validator = ValidatingSink(instance, sink)
        logger.info(f"Solving {record.run_id} with {params.as_dict()}")
        started = time.perf_counter()
        log = solve_instance(instance, params, validator)
        wall_ms = (time.perf_counter() - started) * 1000.0
        if sink is not None:
            sink.close(wall_ms)
    except OSError as e:
        _error(f"cannot write event log: {e}")
        return EXIT_IO_ERROR
    finally:
        if writer is not None:
            writer.close()

    print(f"status: {log.final_status}")
    if log.events:
        last = log.events[-1]
        print(f"cost: {last.cost}")
        print(f"lower bound: {last.lb}")
        print(f"bound: {last.epsilon_bound:.4f}")
        print(f"iterations: {log.iterations}")
        if args.solution_out and log.best_solution is not None:
            write_solution(log.best_solution, args.solution_out)
    if validator.invalid_reports:
        return EXIT_INVALID
    return exit_code_for(log)


@lru_cache(maxsize=8)
def _cached_map(map_path: str):
    return load_map(map_path)


@lru_cache(maxsize=32)
def _cached_scenario(scen_path: str):
    return load_scenario(scen_path)


def execute_run(run: Dict, map_path: str) -> Tuple[RunRecord, str, Optional[str]]:
    """
    One bench run. Never raises: problems become a skipped or failed status so
    the sweep keeps going.
    """
    params: SolverParams = run['profile']['params']
    record = RunRecord(run_id=run['run_id'], map=run['map'], scen=run['scen'],
                       agents=run['agents'], algo=run['algo'], params=params.as_dict())
    try:
        instance = build_instance(_cached_map(map_path), _cached_scenario(run['scen_path']),
                                  run['agents'])
    except ScenarioExhausted as e:
        record.final_status = run_queue.SKIPPED
        return record, run_queue.SKIPPED, str(e)
    except (OSError, ValueError) as e:
        record.final_status = run_queue.FAILED
        return record, run_queue.FAILED, str(e)

    validator = ValidatingSink(instance)
    started = time.perf_counter()
    try:
        log = solve_instance(instance, params, validator)
    except Exception as e:
        logger.error(f"Run {run['run_id']} crashed:\n{traceback.format_exc()}")
        record.final_status = run_queue.FAILED
        record.wall_ms = (time.perf_counter() - started) * 1000.0
        return record, run_queue.FAILED, str(e)

    record.events = list(log.events)
    record.final_status = log.final_status
    record.wall_ms = (time.perf_counter() - started) * 1000.0
    if validator.invalid_reports:
        return record, run_queue.FAILED, "invalid incumbent"
    if log.events:
        return record, run_queue.SOLVED, None
    return record, run_queue.TIMEOUT if log.timed_out else run_queue.NO_SOLUTION, None


def _unique_labels(profiles: List[Dict]) -> None:
    seen: Dict[str, int] = {}
    for profile in profiles:
        base = profile.get('label') or profile['algo']
        seen[base] = seen.get(base, 0) + 1
        profile['label'] = base if seen[base] == 1 else f"{base}-{seen[base]}"


def bench_profiles(args, config: Optional[ConfigManager]) -> List[Dict]:
    """
    Profiles for the sweep: one per ``--algo`` (seeded from the config profile of
    that algorithm, if any) or every config profile. Given flags override profile
    values for the algorithms they apply to.
    """
    flags = {name: getattr(args, name) for name in _FLAG_ALGOS
             if getattr(args, name) is not None}
    if args.algo:
        bases = []
        for algo in dict.fromkeys(args.algo):
            base = config.get_profile(algo) if config is not None else None
            bases.append(dict(base) if base else {'algo': algo})
    elif config is not None:
        bases = config.get_profiles()
    else:
        raise UsageError("bench needs --algo or a --config file with profiles")
    if not bases:
        raise UsageError("no bench profiles to run")

    algos = {b['algo'] for b in bases}
    for name in flags:
        if not _FLAG_ALGOS[name] & algos:
            raise UsageError(f"--{name.replace('_', '-')} does not apply to "
                             f"{', '.join(sorted(algos))}")

    profiles = []
    for base in bases:
        merged = dict(base)
        merged.update({k: v for k, v in flags.items() if base['algo'] in _FLAG_ALGOS[k]})
        params = params_from_profile(merged, args.time_limit)
        profiles.append({'algo': params.algo, 'label': merged.get('label'), 'params': params})
    _unique_labels(profiles)
    return profiles


def _run_queue(queue: RunQueue, map_path: str, jobs: int) -> List[RunRecord]:
    records: Dict[str, RunRecord] = {}
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(execute_run, run, map_path): run['run_id']
                       for run in queue.get_all_runs()}
            for future in as_completed(futures):
                run_id = futures[future]
                try:
                    record, status, message = future.result()
                except Exception as e:
                    logger.error(f"Worker for {run_id} failed: {e}")
                    queue.mark_run(run_id, run_queue.FAILED, str(e))
                    continue
                records[run_id] = record
                queue.mark_run(run_id, status, message)
    else:
        while queue.has_more_runs():
            run = queue.get_current_run()
            record, status, message = execute_run(run, map_path)
            records[run['run_id']] = record
            queue.mark_current(status, message)
    return [records[run['run_id']] for run in queue.runs if run['run_id'] in records]


def run_bench(args) -> int:
    config = ConfigManager(args.config) if args.config else None
    settings = SolverSettings.from_environment(config, args.bench_dir)
    try:
        agent_counts = validate_agent_range(args.agents_min, args.agents_max, args.agent_step)
        profiles = bench_profiles(args, config)
        if args.jobs < 1:
            raise UsageError(f"--jobs must be >= 1, got {args.jobs}")
        if not settings.benchmark_dir:
            raise UsageError("no scenario directory: pass --bench-dir or set MAPF_BENCH_DIR")
        if not Path(args.map).is_file():
            raise UsageError(f"map file not found: {args.map}")
        scen_files = find_scenarios(settings.benchmark_dir, args.map, args.scenarios)
    except (UsageError, FileNotFoundError) as e:
        _error(str(e))
        return EXIT_USAGE
    if not scen_files:
        _error(f"no scenario files for {Path(args.map).name} in {settings.benchmark_dir}")
        return EXIT_DATA_ERROR

    map_name = Path(args.map).stem
    queue = RunQueue()
    for position, scen_path in enumerate(scen_files, start=1):
        index = scenario_index(scen_path, position)
        for k in agent_counts:
            for profile in profiles:
                queue.add_run(map_name, str(scen_path), index, k, profile)
    logger.info(f"Bench sweep: {len(scen_files)} scenarios x {len(agent_counts)} agent "
                f"counts x {len(profiles)} profiles = {len(queue)} runs")

    records = _run_queue(queue, args.map, args.jobs)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    budget_ms = max(p['params'].time_limit or DEFAULT_TIME_LIMIT for p in profiles) * 1000.0
    curves = aggregate_curves(records, default_sample_times(budget_ms))
    written = [write_events(records, out_dir / 'events.jsonl'),
               write_curves_csv(curves, out_dir / 'curves.csv'),
               write_summary_csv(summarize_runs(records), out_dir / 'summary.csv')]
    if args.svg:
        _write_convergence_svg(curves, out_dir / 'convergence.svg')

    summary = queue.get_summary()
    logger.info(f"Bench finished: {summary}")
    print(f"runs: {summary['total_runs']}, solved: {summary['solved']}, "
          f"timeout: {summary['timeout']}, no-solution: {summary['no_solution']}, "
          f"skipped: {summary['skipped']}, failed: {summary['failed']}")
    if all(c.is_empty for c in curves):
        print("no run found a solution: curves are empty")
    if not all(written):
        _error(f"could not write every result file to {out_dir}")
        return EXIT_IO_ERROR
    return EXIT_OK


def _write_convergence_svg(curves, path: Path) -> bool:
    # imported here: matplotlib is only needed when plotting
    from core.plotter import render_svg
    if not any(not c.is_empty for c in curves):
        logger.warning(f"No solved runs; {path.name} not written")
        return False
    path.write_text(render_svg(curves), encoding='utf-8')
    logger.info(f"Wrote {path}")
    return True


def run_validate(args) -> int:
    try:
        solution = read_solution(args.solution)
    except FileNotFoundError as e:
        _error(f"file not found: {e.filename}")
        return EXIT_USAGE
    except (SolutionFormatError, ValueError) as e:
        _error(str(e))
        return EXIT_DATA_ERROR
    if not solution.paths:
        _error(f"{args.solution} contains no paths")
        return EXIT_DATA_ERROR

    k = args.agents or len(solution.paths)
    instance, code = _load_instance(args.map, args.scen, k)
    if instance is None:
        return code
    report = validate_solution(instance, solution)
    print(report.summary())
    return EXIT_OK if report.valid else EXIT_INVALID


def run_plot(args) -> int:
    from core.plotter import convergence_figures, render_trace_svg
    from reports.templates import BenchReportTemplate
    import matplotlib.pyplot as plt

    try:
        records = read_events(args.events)
    except FileNotFoundError as e:
        _error(f"file not found: {e.filename}")
        return EXIT_USAGE
    except (KeyError, TypeError, ValueError) as e:
        _error(f"malformed event log: {e}")
        return EXIT_DATA_ERROR

    budget_ms = args.budget_ms
    if budget_ms is None:
        limits = [r.params.get('time_limit') for r in records if r.params.get('time_limit')]
        budget_ms = (max(limits) if limits else DEFAULT_TIME_LIMIT) * 1000.0
    curves = aggregate_curves(records, default_sample_times(budget_ms, args.samples))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not (write_curves_csv(curves, out_dir / 'curves.csv')
            and write_summary_csv(summarize_runs(records), out_dir / 'summary.csv')):
        _error(f"could not write curve tables to {out_dir}")
        return EXIT_IO_ERROR
    if not _write_convergence_svg(curves, out_dir / 'convergence.svg'):
        print("empty: no solved runs in the event log")

    if args.trace:
        by_id = {r.run_id: r for r in records}
        missing = [run_id for run_id in args.trace if run_id not in by_id]
        for run_id in missing:
            logger.warning(f"Run {run_id} is not in {args.events}")
        chosen = [by_id[run_id] for run_id in args.trace if run_id in by_id]
        if chosen:
            labels = [f"{r.algo} {r.params.get('res', '')}".strip() for r in chosen]
            (out_dir / 'trace.svg').write_text(render_trace_svg(chosen, labels),
                                               encoding='utf-8')

    if args.pdf:
        figures = convergence_figures(c for c in curves if not c.is_empty)
        try:
            ok = BenchReportTemplate().create_report(args.pdf, records, figures,
                                                     event_log=str(args.events))
        finally:
            for figure in figures:
                plt.close(figure)
        if not ok:
            _error(f"could not write {args.pdf}")
            return EXIT_IO_ERROR
    print(f"runs: {len(records)}, curves: {len(curves)}")
    return EXIT_OK


COMMANDS = {
    'solve': run_solve,
    'bench': run_bench,
    'validate': run_validate,
    'plot': run_plot,
}


def dispatch(args) -> int:
    return COMMANDS[args.command](args)
