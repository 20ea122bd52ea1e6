"""
Conflict avoidance table: how many other agents use each timed vertex and directed edge.
"""

from collections import Counter
from typing import Dict, Iterable

from core.conflicts import Path
from core.errors import ContractViolation
from core.gridmap import Cell


class ConflictAvoidanceTable:
    """
    Occupancy counts for timesteps ``0..cost`` of every added path. A path's goal
    is additionally recorded as parked from its cost onwards, so queries past the
    table horizon still see agents waiting at their goals.
    """

    def __init__(self, paths: Iterable[Path] = ()):
        self.vertex_counts: Counter = Counter()
        self.edge_counts: Counter = Counter()
        self.parked: Dict[Cell, Counter] = {}
        self._paths: Counter = Counter()
        self._costs: Counter = Counter()
        for path in paths:
            self.add_path(path)

    @property
    def horizon(self) -> int:
        return max(self._costs, default=0)

    def __len__(self) -> int:
        return sum(self._paths.values())

    def is_empty(self) -> bool:
        return not self._paths

    def add_path(self, path: Path) -> None:
        path = path.trimmed()
        self._update(path, 1)
        self._paths[(path.agent, path.vertices)] += 1
        self._costs[path.cost] += 1

    def remove_path(self, path: Path) -> None:
        path = path.trimmed()
        key = (path.agent, path.vertices)
        if not self._paths[key]:
            raise ContractViolation(f"path of agent {path.agent} was never added")
        self._update(path, -1)
        self._paths[key] -= 1
        if not self._paths[key]:
            del self._paths[key]
        self._costs[path.cost] -= 1
        if not self._costs[path.cost]:
            del self._costs[path.cost]

    def _update(self, path: Path, delta: int) -> None:
        vertices = path.vertices
        for t, cell in enumerate(vertices):
            _bump(self.vertex_counts, (cell, t), delta)
            if t > 0 and vertices[t - 1] != cell:
                _bump(self.edge_counts, (vertices[t - 1], cell, t), delta)
        parked = self.parked.setdefault(path.goal, Counter())
        _bump(parked, path.cost, delta)
        if not parked:
            del self.parked[path.goal]

    def vertex_count(self, cell: Cell, t: int) -> int:
        count = self.vertex_counts.get((cell, t), 0)
        parked = self.parked.get(cell)
        if parked:
            count += sum(n for since, n in parked.items() if since < t)
        return count

    def conflicts_of_move(self, frm: Cell, to: Cell, t_arrive: int) -> int:
        """Vertex collisions at ``to`` plus swap collisions with ``to -> frm``."""
        count = self.vertex_count(to, t_arrive)
        if frm != to:
            count += self.edge_counts.get((to, frm, t_arrive), 0)
        return count

    def path_conflicts(self, path: Path) -> int:
        """
        Conflicts of a whole path against the table, including collisions with
        agents that pass through this path's goal after it parks there.
        """
        horizon = max(path.cost, self.horizon)
        total = self.vertex_count(path.at(0), 0)
        for t in range(1, horizon + 1):
            total += self.conflicts_of_move(path.at(t - 1), path.at(t), t)
        return total


def _bump(counter: Counter, key, delta: int) -> None:
    value = counter.get(key, 0) + delta
    if value:
        counter[key] = value
    else:
        counter.pop(key, None)
