"""
Space-time single-agent planners.

``astar_cat`` is optimal A* that breaks f-ties toward fewer conflict-avoidance-table
hits. ``focal_search`` is bounded-suboptimal focal search whose full state can be
kept and later resumed with a tighter bound by ``resume_focal``.
"""

import heapq
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from sortedcontainers import SortedList

from config.constants import DEADLINE_CHECK_INTERVAL
from core.cat import ConflictAvoidanceTable
from core.conflicts import EDGE, VERTEX, Constraint, Path
from core.deadline import Deadline
from core.errors import ContractViolation
from core.gridmap import Cell, neighbors
from core.instance import Instance

logger = logging.getLogger(__name__)

Bound = Fraction


class ConstraintIndex:
    """Constraints of one agent, indexed for the successor generator."""

    def __init__(self, agent: int, goal: Cell, constraints: Iterable[Constraint]):
        self.vertex = set()
        self.edge = set()
        self.latest = 0
        self.goal_last = -1
        for c in constraints:
            if c.agent != agent:
                raise ContractViolation(f"constraint {c} does not target agent {agent}")
            if c.kind == VERTEX:
                self.vertex.add((tuple(c.location), c.time))
                if tuple(c.location) == goal:
                    self.goal_last = max(self.goal_last, c.time)
            elif c.kind == EDGE:
                u, w = c.location
                self.edge.add((tuple(u), tuple(w), c.time))
            else:
                raise ContractViolation(f"unknown constraint kind '{c.kind}'")
            self.latest = max(self.latest, c.time)

    def allows(self, frm: Cell, to: Cell, t: int) -> bool:
        if (to, t) in self.vertex:
            return False
        return frm == to or (frm, to, t) not in self.edge


class _Node:
    __slots__ = ('cell', 't', 'f', 'conflicts', 'parent', 'idx', 'closed')

    def __init__(self, cell, t, f, conflicts, parent, idx):
        self.cell = cell
        self.t = t
        self.f = f
        self.conflicts = conflicts
        self.parent = parent
        self.idx = idx
        self.closed = False

    def open_key(self):
        return (self.f, self.conflicts, -self.t, self.idx, self.t)

    def focal_key(self):
        return (self.conflicts, self.f, -self.t, self.idx, self.t)


@dataclass
class LowLevelResult:
    """
    ``path`` is None when the agent has no constraint-satisfying path within the
    time horizon. ``expansions`` counts expansions made by this call only.
    """
    path: Optional[Path]
    f_min: Optional[int]
    expansions: int
    state: Optional['LowLevelState'] = None

    @property
    def feasible(self) -> bool:
        return self.path is not None


def time_horizon(instance: Instance, index: ConstraintIndex) -> int:
    return instance.grid.passable_count + index.latest + 1


def _extract(agent: int, node: _Node) -> Path:
    cells = []
    while node is not None:
        cells.append(node.cell)
        node = node.parent
    cells.reverse()
    return Path.of(agent, cells)


class _Expander:
    """Successor generation shared by both planners."""

    def __init__(self, instance: Instance, agent: int, constraints: Iterable[Constraint],
                 cat: Optional[ConflictAvoidanceTable]):
        self.instance = instance
        self.agent = agent
        self.grid = instance.grid
        self.start, self.goal = instance.agents[agent]
        self.h = instance.heuristics[agent]
        self.index = ConstraintIndex(agent, self.goal, constraints)
        self.t_max = time_horizon(instance, self.index)
        self.cat = cat

    def root(self) -> Optional[_Node]:
        if (self.start, 0) in self.index.vertex:
            return None
        conflicts = self.cat.vertex_count(self.start, 0) if self.cat else 0
        return _Node(self.start, 0, self.h[self.start], conflicts, None,
                     self.grid.index(self.start))

    def is_goal(self, node: _Node) -> bool:
        return node.cell == self.goal and node.t > self.index.goal_last

    def successors(self, node: _Node):
        t = node.t + 1
        if t > self.t_max:
            return
        cell = node.cell
        for to in neighbors(self.grid, cell) + [cell]:
            if not self.index.allows(cell, to, t):
                continue
            h = self.h[to]
            if h == math.inf:
                continue
            conflicts = node.conflicts
            if self.cat is not None:
                conflicts += self.cat.conflicts_of_move(cell, to, t)
            yield to, t, t + h, conflicts


def astar_cat(instance: Instance, agent: int, constraints: Iterable[Constraint],
              cat: Optional[ConflictAvoidanceTable] = None,
              deadline: Optional[Deadline] = None) -> LowLevelResult:
    """
    Optimal constrained path. Expansion order is (f, conflicts, larger g, cell index, t).
    """
    ex = _Expander(instance, agent, constraints, cat)
    start = ex.root()
    if start is None:
        return LowLevelResult(None, None, 0)

    nodes: Dict[Tuple[int, int], _Node] = {(start.idx, 0): start}
    heap = [start.open_key()]
    expansions = 0

    while heap:
        key = heapq.heappop(heap)
        node = nodes[(key[3], key[4])]
        if node.closed or key[1] != node.conflicts:
            continue
        if ex.is_goal(node):
            return LowLevelResult(_extract(agent, node), node.f, expansions)

        node.closed = True
        expansions += 1
        if deadline is not None and expansions % DEADLINE_CHECK_INTERVAL == 0:
            deadline.check()

        for to, t, f, conflicts in ex.successors(node):
            idx = instance.grid.index(to)
            child = nodes.get((idx, t))
            if child is None:
                child = _Node(to, t, f, conflicts, node, idx)
                nodes[(idx, t)] = child
            elif child.closed or conflicts >= child.conflicts:
                continue
            else:
                child.conflicts = conflicts
                child.parent = node
            heapq.heappush(heap, child.open_key())

    logger.debug(f"A*: agent {agent} infeasible after {expansions} expansions")
    return LowLevelResult(None, None, expansions)


class LowLevelState:
    """
    Resumable focal search: OPEN ordered by f, FOCAL = {n in OPEN : f <= eps * f_min}
    ordered by accumulated conflicts. The node returned last stays in OPEN, so a
    resumed search whose bound still admits it returns it without expanding.
    """

    def __init__(self, instance: Instance, agent: int, constraints: Iterable[Constraint],
                 cat: Optional[ConflictAvoidanceTable], epsilon: Bound):
        if epsilon < 1:
            raise ContractViolation(f"low-level bound must be >= 1, got {epsilon}")
        self.agent = agent
        self.epsilon_low = Fraction(epsilon)
        self._ex = _Expander(instance, agent, constraints, cat)
        self.open = SortedList()
        self.focal = SortedList()
        self.nodes: Dict[Tuple[int, int], _Node] = {}
        self.closed_count = 0
        self.expansions = 0
        self.f_min = 0
        self.last_path: Optional[Path] = None
        self._limit = -1

        start = self._ex.root()
        if start is not None:
            self.nodes[(start.idx, 0)] = start
            self.open.add(start.open_key())
            self.f_min = start.f

    @property
    def cat(self) -> Optional[ConflictAvoidanceTable]:
        return self._ex.cat

    @cat.setter
    def cat(self, table: Optional[ConflictAvoidanceTable]) -> None:
        self._ex.cat = table

    @property
    def constraint_index(self) -> ConstraintIndex:
        return self._ex.index

    def _bound(self) -> int:
        return math.floor(self.epsilon_low * self.f_min)

    def _rebuild_focal(self) -> None:
        self._limit = self._bound()
        self.focal = SortedList(self.nodes[(k[3], k[4])].focal_key()
                                for k in self.open.irange(maximum=(self._limit + 1,),
                                                          inclusive=(True, False)))

    def _raise_focal(self) -> None:
        """Admit OPEN nodes newly under the bound after f_min grew."""
        self.f_min = max(self.f_min, self.open[0][0])
        limit = self._bound()
        if limit <= self._limit:
            return
        for k in self.open.irange(minimum=(self._limit + 1,), maximum=(limit + 1,),
                                  inclusive=(True, False)):
            self.focal.add(self.nodes[(k[3], k[4])].focal_key())
        self._limit = limit

    def _push(self, node: _Node) -> None:
        self.open.add(node.open_key())
        if node.f <= self._limit:
            self.focal.add(node.focal_key())

    def _discard(self, node: _Node) -> None:
        self.open.remove(node.open_key())
        if node.f <= self._limit:
            self.focal.remove(node.focal_key())

    def run(self, deadline: Optional[Deadline] = None) -> LowLevelResult:
        ex = self._ex
        done = 0
        if self._limit < 0 and self.open:
            self._rebuild_focal()

        while self.open:
            self._raise_focal()
            key = self.focal[0]
            node = self.nodes[(key[3], key[4])]
            if ex.is_goal(node):
                self.last_path = _extract(self.agent, node)
                return LowLevelResult(self.last_path, self.f_min, done, self)

            self._discard(node)
            node.closed = True
            self.closed_count += 1
            done += 1
            self.expansions += 1
            if deadline is not None and done % DEADLINE_CHECK_INTERVAL == 0:
                deadline.check()

            for to, t, f, conflicts in ex.successors(node):
                idx = ex.grid.index(to)
                child = self.nodes.get((idx, t))
                if child is None:
                    child = _Node(to, t, f, conflicts, node, idx)
                    self.nodes[(idx, t)] = child
                elif child.closed or conflicts >= child.conflicts:
                    continue
                else:
                    self._discard(child)
                    child.conflicts = conflicts
                    child.parent = node
                self._push(child)

        logger.debug(f"Focal search: agent {self.agent} infeasible after "
                     f"{self.expansions} expansions")
        self.last_path = None
        return LowLevelResult(None, None, done, self)

    def tighten(self, epsilon: Bound) -> None:
        """Lower the bound and drop FOCAL members that no longer qualify."""
        epsilon = Fraction(epsilon)
        if epsilon > self.epsilon_low:
            raise ContractViolation(f"cannot loosen low-level bound from "
                                    f"{self.epsilon_low} to {epsilon}")
        if epsilon < 1:
            raise ContractViolation(f"low-level bound must be >= 1, got {epsilon}")
        self.epsilon_low = epsilon
        if self.open:
            self._rebuild_focal()


def focal_search(instance: Instance, agent: int, constraints: Iterable[Constraint],
                 cat: Optional[ConflictAvoidanceTable], eps_low: Bound,
                 deadline: Optional[Deadline] = None,
                 persist: bool = False) -> LowLevelResult:
    """
    Bounded-suboptimal path with cost <= eps_low * f_min. The search state is
    attached to the result only when ``persist`` is set.
    """
    state = LowLevelState(instance, agent, constraints, cat, Fraction(eps_low))
    result = state.run(deadline)
    if not persist:
        result.state = None
    return result


def resume_focal(state: LowLevelState, eps_new: Bound,
                 cat: Optional[ConflictAvoidanceTable] = None,
                 deadline: Optional[Deadline] = None) -> LowLevelResult:
    """
    Continue a kept focal search under a tighter bound. Conflict counts of nodes
    generated earlier are not recomputed; ``cat`` only affects new nodes.
    """
    if state.last_path is None:
        raise ContractViolation("resume requires a search that previously produced a path")
    state.tighten(eps_new)
    if cat is not None:
        state.cat = cat
    return state.run(deadline)
