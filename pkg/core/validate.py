"""
Independent solution checking and an exhaustive joint-space optimum for tiny instances.

Nothing here reuses the solvers' conflict scanning or search code, so agreement
between these checks and the solvers is real evidence.
"""

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from core.conflicts import Constraint, Solution
from core.gridmap import Cell
from core.instance import Instance

logger = logging.getLogger(__name__)

VERTEX_CONFLICT = 'vertex-conflict'
EDGE_CONFLICT = 'edge-conflict'
ILLEGAL_MOVE = 'illegal-move'
CONSTRAINT_VIOLATION = 'constraint-violation'
COST_MISMATCH = 'cost-mismatch'


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)
    recomputed_soc: int = 0

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, kind: str, detail: str) -> None:
        self.violations.append(Violation(kind, detail))

    def kinds(self) -> List[str]:
        return [v.kind for v in self.violations]

    def summary(self) -> str:
        if self.valid:
            return f"valid (SOC {self.recomputed_soc})"
        lines = [f"invalid: {len(self.violations)} violation(s), SOC {self.recomputed_soc}"]
        lines.extend(f"  {v.kind}: {v.detail}" for v in self.violations)
        return '\n'.join(lines)


def _position(cells: Tuple[Cell, ...], t: int) -> Cell:
    return cells[t] if t < len(cells) else cells[-1]


def _arrival(cells: Tuple[Cell, ...]) -> int:
    t = len(cells) - 1
    while t > 0 and cells[t - 1] == cells[-1]:
        t -= 1
    return t


def _check_moves(instance: Instance, agent: int, cells: Tuple[Cell, ...],
                 report: ValidationReport) -> None:
    grid = instance.grid
    start, goal = instance.agents[agent]
    if not cells:
        report.add(ILLEGAL_MOVE, f"agent {agent}: empty path")
        return
    if cells[0] != start:
        report.add(ILLEGAL_MOVE, f"agent {agent}: starts at {cells[0]}, expected {start}")
    if cells[-1] != goal:
        report.add(ILLEGAL_MOVE, f"agent {agent}: ends at {cells[-1]}, expected {goal}")
    for t, cell in enumerate(cells):
        if not grid.is_passable(cell):
            report.add(ILLEGAL_MOVE, f"agent {agent}: {cell} at t={t} is not passable")
        if t > 0:
            prev = cells[t - 1]
            if abs(prev[0] - cell[0]) + abs(prev[1] - cell[1]) > 1:
                report.add(ILLEGAL_MOVE, f"agent {agent}: jump {prev} -> {cell} at t={t}")


def _check_pairs(paths: List[Tuple[int, Tuple[Cell, ...]]], report: ValidationReport) -> None:
    horizon = max(len(cells) for _, cells in paths)
    for (i, a), (j, b) in itertools.combinations(paths, 2):
        for t in range(horizon):
            if _position(a, t) == _position(b, t):
                report.add(VERTEX_CONFLICT,
                           f"agents {i} and {j} at {_position(a, t)} at t={t}")
            if t > 0:
                a0, a1 = _position(a, t - 1), _position(a, t)
                b0, b1 = _position(b, t - 1), _position(b, t)
                if a0 != a1 and a0 == b1 and a1 == b0:
                    report.add(EDGE_CONFLICT,
                               f"agents {i} and {j} swap {a0} <-> {a1} at t={t}")


def _check_constraints(agent: int, cells: Tuple[Cell, ...], constraints: Iterable[Constraint],
                       report: ValidationReport) -> None:
    for c in constraints:
        t = c.time
        if c.kind == 'vertex':
            if _position(cells, t) == tuple(c.location):
                report.add(CONSTRAINT_VIOLATION,
                           f"agent {agent}: at {tuple(c.location)} at t={t}")
        elif t > 0:
            u, w = c.location
            if (_position(cells, t - 1), _position(cells, t)) == (tuple(u), tuple(w)):
                report.add(CONSTRAINT_VIOLATION,
                           f"agent {agent}: moves {tuple(u)} -> {tuple(w)} at t={t}")


def validate_solution(instance: Instance, solution: Solution,
                      constraints: Optional[Mapping[int, Iterable[Constraint]]] = None,
                      claimed_soc: Optional[int] = None) -> ValidationReport:
    """
    Check a solution against the instance. Problems are collected into the
    report rather than raised. ``constraints`` maps agent index to the
    constraints its path must satisfy.
    """
    report = ValidationReport()
    by_agent: Dict[int, Tuple[Cell, ...]] = {}
    for path in solution.paths:
        if not 0 <= path.agent < instance.num_agents:
            report.add(ILLEGAL_MOVE, f"path for unknown agent {path.agent}")
            continue
        if path.agent in by_agent:
            report.add(ILLEGAL_MOVE, f"agent {path.agent} has more than one path")
            continue
        by_agent[path.agent] = tuple(tuple(v) for v in path.vertices)

    for agent in range(instance.num_agents):
        if agent not in by_agent:
            report.add(ILLEGAL_MOVE, f"agent {agent} has no path")

    for agent, cells in sorted(by_agent.items()):
        _check_moves(instance, agent, cells, report)
        if cells:
            report.recomputed_soc += _arrival(cells)
        if constraints and cells:
            _check_constraints(agent, cells, constraints.get(agent, ()), report)

    _check_pairs([(a, c) for a, c in sorted(by_agent.items()) if c], report)

    if claimed_soc is not None and claimed_soc != report.recomputed_soc:
        report.add(COST_MISMATCH,
                   f"claimed SOC {claimed_soc}, recomputed {report.recomputed_soc}")
    return report


def default_cost_cap(instance: Instance) -> int:
    grid = instance.grid
    base = sum(int(instance.heuristics[i][s]) for i, (s, _) in enumerate(instance.agents))
    return base + 2 * instance.num_agents * (grid.width + grid.height)


def _steps(instance: Instance, cell: Cell) -> List[Cell]:
    x, y = cell
    options = [cell]
    for nx, ny in ((x, y - 1), (x, y + 1), (x - 1, y), (x + 1, y)):
        if instance.grid.is_passable((nx, ny)):
            options.append((nx, ny))
    return options


def _joint_moves(instance: Instance, positions: Tuple[Cell, ...], finished: int):
    """Collision-free joint successors; finished agents stay on their goals."""
    k = len(positions)
    choices = [[positions[i]] if finished >> i & 1 else _steps(instance, positions[i])
               for i in range(k)]
    for combo in itertools.product(*choices):
        if len(set(combo)) < k:
            continue
        swap = False
        for i in range(k):
            for j in range(i + 1, k):
                if combo[i] == positions[j] and combo[j] == positions[i] \
                        and combo[i] != positions[i]:
                    swap = True
                    break
            if swap:
                break
        if not swap:
            yield combo


def brute_force_optimal(instance: Instance, cost_cap: Optional[int] = None) -> Optional[int]:
    """
    Exact minimum sum of costs by A* over joint states (positions, finished set).

    Declaring an agent finished is free and only possible on its goal; every
    joint timestep costs one per unfinished agent. Returns None when no
    solution costs at most ``cost_cap``.
    """
    k = instance.num_agents
    goals = tuple(g for _, g in instance.agents)
    h_tables = instance.heuristics
    cap = default_cost_cap(instance) if cost_cap is None else cost_cap
    all_done = (1 << k) - 1

    def h(positions, finished):
        return sum(int(h_tables[i][positions[i]]) for i in range(k) if not finished >> i & 1)

    start = (tuple(s for s, _ in instance.agents), 0)
    best_g = {start: 0}
    counter = itertools.count()
    # ties on f go to the deeper state
    heap = [(h(*start), 0, next(counter), start)]
    expanded = 0

    while heap:
        f, neg_g, _, state = heapq.heappop(heap)
        g = -neg_g
        if g > best_g.get(state, g):
            continue
        if f > cap:
            break
        positions, finished = state
        if finished == all_done:
            logger.debug(f"Joint search: optimum {g} after {expanded} expansions")
            return g
        expanded += 1

        successors = []
        for i in range(k):
            if not finished >> i & 1 and positions[i] == goals[i]:
                successors.append(((positions, finished | 1 << i), 0))
        step = k - bin(finished).count('1')
        for combo in _joint_moves(instance, positions, finished):
            successors.append(((combo, finished), step))

        for nxt, cost in successors:
            ng = g + cost
            if ng < best_g.get(nxt, ng + 1):
                best_g[nxt] = ng
                heapq.heappush(heap, (ng + h(*nxt), -ng, next(counter), nxt))

    logger.debug(f"Joint search: no solution within cap {cap}")
    return None
