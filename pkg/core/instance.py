"""
MAPF instance assembly and per-agent distance fields.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from numpy.typing import NDArray

from core.errors import ContractViolation, ScenarioExhausted, UnreachableGoal
from core.gridmap import Cell, GridMap, Scenario, neighbors

logger = logging.getLogger(__name__)


class DistanceField:
    """
    Exact shortest move counts to a fixed goal. Unreachable cells hold ``inf``.
    """

    def __init__(self, goal: Cell, values: NDArray[np.float64]):
        self.goal = goal
        self.values = values
        self.values.setflags(write=False)
        # plain nested lists are much faster to index from the search loops
        self._table = [[int(v) if math.isfinite(v) else math.inf for v in row]
                       for row in values.tolist()]

    def __getitem__(self, c: Cell):
        return self._table[c[1]][c[0]]

    def is_reachable(self, c: Cell) -> bool:
        return self._table[c[1]][c[0]] != math.inf


def compute_distance_field(grid: GridMap, goal: Cell) -> DistanceField:
    """Backward breadth-first search from ``goal``."""
    if not grid.is_passable(goal):
        raise ContractViolation(f"goal {goal} is blocked or out of bounds")

    dist = np.full((grid.height, grid.width), np.inf)
    dist[goal[1], goal[0]] = 0
    frontier = deque([goal])
    while frontier:
        c = frontier.popleft()
        d = dist[c[1], c[0]] + 1
        for n in neighbors(grid, c):
            if dist[n[1], n[0]] == np.inf:
                dist[n[1], n[0]] = d
                frontier.append(n)
    return DistanceField(goal, dist)


@dataclass(frozen=True, eq=False)
class Instance:
    grid: GridMap
    agents: Tuple[Tuple[Cell, Cell], ...]
    heuristics: Tuple[DistanceField, ...]

    @property
    def num_agents(self) -> int:
        return len(self.agents)

    def start(self, agent: int) -> Cell:
        return self.agents[agent][0]

    def goal(self, agent: int) -> Cell:
        return self.agents[agent][1]


def make_instance(grid: GridMap, agents: List[Tuple[Cell, Cell]]) -> Instance:
    """
    Build an instance from explicit (start, goal) pairs, checking the invariants.
    """
    if not agents:
        raise ContractViolation("instance needs at least one agent")
    starts = [s for s, _ in agents]
    goals = [g for _, g in agents]
    if len(set(starts)) != len(starts):
        raise ContractViolation("agent starts must be pairwise distinct")
    if len(set(goals)) != len(goals):
        raise ContractViolation("agent goals must be pairwise distinct")

    heuristics = []
    for i, (start, goal) in enumerate(agents):
        if not grid.is_passable(start):
            raise ContractViolation(f"agent {i}: start {start} is not a passable cell")
        if not grid.is_passable(goal):
            raise ContractViolation(f"agent {i}: goal {goal} is not a passable cell")
        field = compute_distance_field(grid, goal)
        if not field.is_reachable(start):
            raise UnreachableGoal(i, start, goal)
        heuristics.append(field)

    return Instance(grid=grid, agents=tuple((tuple(s), tuple(g)) for s, g in agents),
                    heuristics=tuple(heuristics))


def build_instance(grid: GridMap, scen: Scenario, k: int) -> Instance:
    """Instance over the first ``k`` scenario entries."""
    if k <= 0:
        raise ContractViolation(f"agent count must be positive, got {k}")
    if k > len(scen.entries):
        raise ScenarioExhausted(k, len(scen.entries))

    instance = make_instance(grid, [(e.start, e.goal) for e in scen.entries[:k]])
    logger.info(f"Built instance with {k} agents on {grid.name or 'map'} "
                f"({grid.width}x{grid.height})")
    return instance
