"""
Paths, solutions, constraints and conflict detection under stay-at-target semantics.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from core.gridmap import Cell

VERTEX = 'vertex'
EDGE = 'edge'


def _arrival_time(vertices: Sequence[Cell]) -> int:
    last = len(vertices) - 1
    while last > 0 and vertices[last - 1] == vertices[-1]:
        last -= 1
    return last


@dataclass(frozen=True)
class Path:
    """
    Timed cell sequence for one agent; ``vertices[t]`` is the cell at timestep t.
    The agent stays at ``vertices[-1]`` forever after the last entry.
    """
    agent: int
    vertices: Tuple[Cell, ...]

    @classmethod
    def of(cls, agent: int, vertices: Iterable[Cell]) -> 'Path':
        return cls(agent, tuple(tuple(v) for v in vertices))

    @property
    def cost(self) -> int:
        return _arrival_time(self.vertices)

    @property
    def goal(self) -> Cell:
        return self.vertices[-1]

    def at(self, t: int) -> Cell:
        if t < len(self.vertices):
            return self.vertices[t]
        return self.vertices[-1]

    def trimmed(self) -> 'Path':
        """The same path without redundant trailing goal waits."""
        return Path(self.agent, self.vertices[:self.cost + 1])


@dataclass(frozen=True)
class Solution:
    paths: Tuple[Path, ...]

    @classmethod
    def of(cls, paths: Iterable[Path]) -> 'Solution':
        return cls(tuple(paths))

    @property
    def soc(self) -> int:
        return sum(p.cost for p in self.paths)

    @property
    def makespan(self) -> int:
        return max((p.cost for p in self.paths), default=0)


@dataclass(frozen=True)
class Conflict:
    """
    ``location`` is a Cell for vertex conflicts and the (from, to) traversal of
    ``agents[0]`` for edge conflicts. ``time`` is the arrival timestep.
    """
    kind: str
    agents: Tuple[int, int]
    location: tuple
    time: int


@dataclass(frozen=True)
class Constraint:
    agent: int
    kind: str
    location: tuple
    time: int


def _scan(paths: Sequence[Path]):
    """
    Yield, per timestep, the vertex and edge conflicts among ``paths``.

    Pairs are reported with the smaller agent index first. Vertex conflicts come
    before edge conflicts within a timestep.
    """
    horizon = max((p.cost for p in paths), default=0)
    for t in range(horizon + 1):
        occupancy: Dict[Cell, List[int]] = {}
        for p in paths:
            occupancy.setdefault(p.at(t), []).append(p.agent)
        vertex = []
        for cell, agents in occupancy.items():
            if len(agents) > 1:
                agents = sorted(agents)
                for a in range(len(agents)):
                    for b in range(a + 1, len(agents)):
                        vertex.append(Conflict(VERTEX, (agents[a], agents[b]), cell, t))

        edge = []
        if t > 0:
            moves: Dict[Tuple[Cell, Cell], List[int]] = {}
            for p in paths:
                u, w = p.at(t - 1), p.at(t)
                if u != w:
                    moves.setdefault((u, w), []).append(p.agent)
            for (u, w), movers in moves.items():
                for i in movers:
                    for j in moves.get((w, u), ()):
                        if i < j:
                            edge.append(Conflict(EDGE, (i, j), (u, w), t))
        yield t, vertex, edge


def find_first_conflict(solution: Solution, grid_width: Optional[int] = None) -> Optional[Conflict]:
    """
    Earliest conflict; ties go vertex before edge, then smallest (i, j), then
    cell index (row-major; ``grid_width`` defaults to a width covering every cell).
    """
    paths = solution.paths
    if grid_width is None:
        grid_width = 1 + max((v[0] for p in paths for v in p.vertices), default=0)

    def cell_index(c: Cell) -> int:
        return c[1] * grid_width + c[0]

    for _, vertex, edge in _scan(paths):
        if vertex:
            return min(vertex, key=lambda c: (c.agents, cell_index(c.location)))
        if edge:
            return min(edge, key=lambda c: (c.agents, cell_index(c.location[0]),
                                            cell_index(c.location[1])))
    return None


def all_conflicts(solution: Solution) -> List[Conflict]:
    """Every distinct conflict event, in scan order."""
    events = []
    for _, vertex, edge in _scan(solution.paths):
        events.extend(vertex)
        events.extend(edge)
    return events


def count_conflicts(solution: Solution) -> int:
    return len(all_conflicts(solution))


def has_conflict(solution: Solution, conflict: Conflict) -> bool:
    """Whether exactly this conflict event still occurs in ``solution``."""
    by_agent = {p.agent: p for p in solution.paths}
    i, j = conflict.agents
    if i not in by_agent or j not in by_agent:
        return False
    pi, pj, t = by_agent[i], by_agent[j], conflict.time
    if conflict.kind == VERTEX:
        return pi.at(t) == conflict.location and pj.at(t) == conflict.location
    if t == 0:
        return False
    u, w = conflict.location
    return (pi.at(t - 1) == u and pi.at(t) == w
            and pj.at(t - 1) == w and pj.at(t) == u)


def split_constraints(c: Conflict) -> Tuple[Constraint, Constraint]:
    i, j = c.agents
    if c.kind == VERTEX:
        return (Constraint(i, VERTEX, c.location, c.time),
                Constraint(j, VERTEX, c.location, c.time))
    u, w = c.location
    return (Constraint(i, EDGE, (u, w), c.time),
            Constraint(j, EDGE, (w, u), c.time))


def violates(path: Path, constraint: Constraint) -> bool:
    t = constraint.time
    if constraint.kind == VERTEX:
        return path.at(t) == constraint.location
    if t == 0:
        return False
    return (path.at(t - 1), path.at(t)) == tuple(constraint.location)
