"""
Argument parser for the solve / bench / validate / plot commands.
"""

import argparse
import sys

from config.constants import (ALGORITHMS, DEFAULT_AGENT_STEP, DEFAULT_SCENARIO_COUNT,
                              DEFAULT_SAMPLE_COUNT, EXIT_USAGE, RESTART_POLICIES)


class CliParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; 2 means timeout here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    """Solver flags default to None so the combination checks can tell 'not given'."""
    group = parser.add_argument_group('solver')
    group.add_argument('--eps0', default=None,
                       help='initial bound for anytime runs, the bound for ecbs, '
                            'and eps_high for bcbs (default 10; accepts 7/6)')
    group.add_argument('--eps-high', dest='eps_high', default=None,
                       help='high-level bound for bcbs')
    group.add_argument('--eps-low', dest='eps_low', default=None,
                       help='low-level bound for bcbs (default 1)')
    group.add_argument('--res', choices=list(RESTART_POLICIES), default=None,
                       help='restart policy: 1 every iteration, 2 every other, never '
                            '(default never for abcbs, 1 for aecbs)')
    group.add_argument('--cic', default=None, metavar='{true,false}',
                       help='cut irrelevant constraints after repair (aecbs only, default true)')
    group.add_argument('--time-limit', dest='time_limit', type=float, default=None,
                       help='seconds per run (default 90)')


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(
        prog='anytime-cbs',
        description='Anytime conflict-based search for multi-agent pathfinding on '
                    'MovingAI grid benchmarks.',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog='Exit codes: 0 ok, 1 invalid solution, 2 timeout, 3 no solution, '
               '64 usage error, 65 data error, 74 output write error.'
    )
    parser.add_argument('--log-level', dest='log_level', default='INFO',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parser.add_argument('--log-file', dest='log_file', default=None)
    parser.add_argument('--no-log-file', dest='no_log_file', action='store_true',
                        help='log to stderr only')
    sub = parser.add_subparsers(dest='command', required=True)

    solve = sub.add_parser('solve', help='solve one instance')
    solve.add_argument('--map', required=True, help='MovingAI .map file')
    solve.add_argument('--scen', required=True, help='MovingAI .scen file')
    solve.add_argument('--agents', '-k', type=int, required=True,
                       help='use the first K scenario entries')
    solve.add_argument('--algo', choices=ALGORITHMS, required=True)
    _add_solver_flags(solve)
    solve.add_argument('--solution-out', dest='solution_out', default=None,
                       help='write the best solution to this file')
    solve.add_argument('--events-out', dest='events_out', default=None,
                       help='write the incumbent event log (JSON lines) to this file')

    bench = sub.add_parser('bench', help='sweep scenarios and agent counts')
    bench.add_argument('--map', required=True, help='MovingAI .map file')
    bench.add_argument('--bench-dir', dest='bench_dir', default=None,
                       help='scenario directory (default: $MAPF_BENCH_DIR or config)')
    bench.add_argument('--scenarios', type=int, default=DEFAULT_SCENARIO_COUNT,
                       help='number of scenario files to use, in name order')
    bench.add_argument('--agents-min', dest='agents_min', type=int, required=True)
    bench.add_argument('--agents-max', dest='agents_max', type=int, required=True)
    bench.add_argument('--agent-step', dest='agent_step', type=int,
                       default=DEFAULT_AGENT_STEP)
    bench.add_argument('--algo', choices=ALGORITHMS, action='append', default=None,
                       help='algorithm to run; repeat for several')
    bench.add_argument('--config', default=None,
                       help='JSON bench profile file')
    _add_solver_flags(bench)
    bench.add_argument('--out-dir', dest='out_dir', default='bench_out')
    bench.add_argument('--svg', action='store_true', help='also write convergence.svg')
    bench.add_argument('--jobs', type=int, default=1,
                       help='concurrent runs (default 1, sequential)')

    validate = sub.add_parser('validate', help='check a stored solution')
    validate.add_argument('--map', required=True)
    validate.add_argument('--scen', required=True)
    validate.add_argument('--solution', required=True)
    validate.add_argument('--agents', '-k', type=int, default=None,
                          help='agent count (default: number of paths in the solution)')

    plot = sub.add_parser('plot', help='aggregate an event log into curves')
    plot.add_argument('--events', required=True, help='JSON-lines event log')
    plot.add_argument('--out-dir', dest='out_dir', default='plots')
    plot.add_argument('--samples', type=int, default=DEFAULT_SAMPLE_COUNT,
                      help='number of sample times')
    plot.add_argument('--budget-ms', dest='budget_ms', type=float, default=None,
                      help='last sample time (default: largest time limit in the log)')
    plot.add_argument('--trace', action='append', default=None, metavar='RUN_ID',
                      help='also plot the bound trace of this run; repeatable')
    plot.add_argument('--pdf', default=None, help='also write a PDF summary here')

    return parser
