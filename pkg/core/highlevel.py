"""
Constraint-tree search: optimal CBS, BCBS(eps_high, eps_low) and ECBS(eps).
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Union

from sortedcontainers import SortedList

from core.cat import ConflictAvoidanceTable
from core.conflicts import (Conflict, Constraint, Path, Solution, count_conflicts,
                            find_first_conflict, split_constraints)
from core.deadline import Deadline
from core.errors import ContractViolation, SearchTimeout
from core.instance import Instance
from core.lowlevel import LowLevelResult, LowLevelState, astar_cat, focal_search

logger = logging.getLogger(__name__)

CBS = 'cbs'
BCBS = 'bcbs'
ECBS = 'ecbs'

SOLVED = 'solved'
TIMEOUT = 'timeout'
INFEASIBLE = 'infeasible'


@dataclass(eq=False)
class CTNode:
    id: int
    parent: Optional[int]
    constraints: FrozenSet[Constraint]
    split_conflict: Optional[Conflict]
    paths: List[Path]
    f_mins: List[int]
    cost: int = 0
    lb: int = 0
    num_conflicts: int = 0
    low_level_states: Optional[List[Optional[LowLevelState]]] = None
    expanded: bool = False
    children: List[int] = field(default_factory=list)

    @property
    def solution(self) -> Solution:
        return Solution.of(self.paths)

    def agent_constraints(self, agent: int) -> List[Constraint]:
        return [c for c in self.constraints if c.agent == agent]

    def refresh(self) -> None:
        """Recompute cost, lower bound and conflict count from the paths."""
        self.cost = sum(p.cost for p in self.paths)
        self.lb = sum(self.f_mins)
        self.num_conflicts = count_conflicts(self.solution)


@dataclass
class SolveResult:
    solution: Optional[Solution]
    cost: Optional[int]
    lb_at_return: Optional[int]
    hl_expanded: int
    ll_expanded: int
    elapsed: float
    status: str
    nodes_generated: int = 0

    @property
    def bound(self) -> Optional[Fraction]:
        """Proven suboptimality factor cost / LB."""
        if self.cost is None or not self.lb_at_return:
            return None
        return Fraction(self.cost, self.lb_at_return)


class ConstraintTree:
    """
    CT nodes plus the OPEN and FOCAL lists. FOCAL holds the OPEN nodes whose cost
    is within ``epsilon`` times the OPEN key minimum (lb for ECBS, cost otherwise).
    """

    def __init__(self, mode: str, epsilon: Fraction):
        self.mode = mode
        self.epsilon = Fraction(epsilon)
        self.nodes: Dict[int, CTNode] = {}
        self.root: Optional[int] = None
        self.open = SortedList()
        self.open_by_cost = SortedList()
        self.focal = SortedList()
        self.incumbent: Optional[CTNode] = None
        self._limit: Optional[int] = None
        self._next_id = 0

    def new_id(self) -> int:
        node_id = self._next_id
        self._next_id += 1
        return node_id

    def open_key(self, node: CTNode):
        if self.mode == ECBS:
            return (node.lb, node.cost, node.id)
        return (node.cost, node.num_conflicts, node.id)

    @staticmethod
    def focal_key(node: CTNode):
        return (node.num_conflicts, node.cost, node.id)

    def __len__(self) -> int:
        return len(self.nodes)

    def is_open(self, node_id: int) -> bool:
        node = self.nodes[node_id]
        return self.open_key(node) in self.open

    def push(self, node: CTNode) -> None:
        self.open.add(self.open_key(node))
        self.open_by_cost.add((node.cost, node.id))
        if self._limit is not None and node.cost <= self._limit:
            self.focal.add(self.focal_key(node))

    def pop(self, node: CTNode) -> None:
        self.open.remove(self.open_key(node))
        self.open_by_cost.remove((node.cost, node.id))
        if self._limit is not None and node.cost <= self._limit:
            self.focal.remove(self.focal_key(node))

    def clear_open(self) -> None:
        self.open.clear()
        self.open_by_cost.clear()
        self.focal.clear()
        self._limit = None

    def min_open_key(self) -> int:
        return self.open[0][0]

    def sync_focal(self) -> None:
        """Bring FOCAL in line with the current OPEN minimum and epsilon."""
        if not self.open:
            self.focal.clear()
            self._limit = None
            return
        limit = math.floor(self.epsilon * self.min_open_key())
        if self._limit is None:
            self.focal = SortedList(self.focal_key(self.nodes[i]) for _, i in
                                    self.open_by_cost.irange(maximum=(limit, math.inf)))
        elif limit > self._limit:
            for _, i in self.open_by_cost.irange(minimum=(self._limit + 1, -1),
                                                 maximum=(limit, math.inf)):
                self.focal.add(self.focal_key(self.nodes[i]))
        elif limit < self._limit:
            for _, i in self.open_by_cost.irange(minimum=(limit + 1, -1),
                                                 maximum=(self._limit, math.inf)):
                self.focal.remove(self.focal_key(self.nodes[i]))
        self._limit = limit

    def set_epsilon(self, epsilon: Fraction) -> None:
        """Change the bound; FOCAL members that no longer qualify are dropped."""
        self.epsilon = Fraction(epsilon)
        self.sync_focal()

    def subtree(self, node_id: int) -> List[int]:
        """Ids of ``node_id`` and all its descendants, breadth-first."""
        order = [node_id]
        for i in order:
            order.extend(self.nodes[i].children)
        return order

    def delete_subtree(self, node_id: int) -> int:
        """Remove a subtree from the tree and OPEN; returns the number of nodes removed."""
        doomed = self.subtree(node_id)
        parent = self.nodes[node_id].parent
        if parent is not None and parent in self.nodes:
            self.nodes[parent].children.remove(node_id)
        for i in doomed:
            node = self.nodes.pop(i)
            if self.open_key(node) in self.open:
                self.pop(node)
            if self.incumbent is node:
                self.incumbent = None
        return len(doomed)


class ConstraintTreeSearch:
    """
    One CBS-family search over a constraint tree. ``run`` may be called again
    after a solution is returned, typically with a tighter epsilon, and continues
    from the remaining OPEN list.
    """

    def __init__(self, instance: Instance, mode: str = CBS,
                 eps_high: Union[Fraction, float, int] = 1,
                 eps_low: Union[Fraction, float, int] = 1,
                 retain: bool = False):
        if mode not in (CBS, BCBS, ECBS):
            raise ContractViolation(f"unknown search mode '{mode}'")
        eps_high, eps_low = Fraction(eps_high), Fraction(eps_low)
        if eps_high < 1 or eps_low < 1:
            raise ContractViolation("suboptimality bounds must be >= 1")
        self.instance = instance
        self.mode = mode
        self.eps_low = eps_low
        self.retain = retain
        self.tree = ConstraintTree(mode, eps_high if mode != CBS else Fraction(1))
        self.hl_expanded = 0
        self.ll_expanded = 0
        self.best_lb = 0

    @property
    def epsilon(self) -> Fraction:
        return self.tree.epsilon

    def set_epsilon(self, epsilon) -> None:
        epsilon = Fraction(epsilon)
        if epsilon < 1:
            raise ContractViolation(f"suboptimality bound must be >= 1, got {epsilon}")
        self.tree.set_epsilon(epsilon)
        logger.debug(f"{self.mode}: epsilon set to {float(epsilon):.4f}")

    def plan(self, agent: int, constraints: List[Constraint],
             cat: Optional[ConflictAvoidanceTable],
             deadline: Optional[Deadline]) -> LowLevelResult:
        """Low-level call for one agent under this search's mode."""
        if self.mode == ECBS:
            result = focal_search(self.instance, agent, constraints, cat,
                                  self.tree.epsilon, deadline, persist=self.retain)
        elif self.mode == BCBS and self.eps_low > 1:
            result = focal_search(self.instance, agent, constraints, cat,
                                  self.eps_low, deadline)
        else:
            result = astar_cat(self.instance, agent, constraints, cat, deadline)
        self.ll_expanded += result.expansions
        return result

    def build_root(self, deadline: Optional[Deadline] = None) -> bool:
        """Plan every agent independently. Returns False when some agent is infeasible."""
        tree = self.tree
        paths, f_mins, states = [], [], []
        for agent in range(self.instance.num_agents):
            result = self.plan(agent, [], None, deadline)
            if not result.feasible:
                logger.info(f"{self.mode}: agent {agent} has no path at the root")
                return False
            paths.append(result.path)
            f_mins.append(result.f_min)
            states.append(result.state)

        root = CTNode(id=tree.new_id(), parent=None, constraints=frozenset(),
                      split_conflict=None, paths=paths, f_mins=f_mins,
                      low_level_states=states if self.retain and self.mode == ECBS else None)
        root.refresh()
        tree.nodes[root.id] = root
        tree.root = root.id
        tree.push(root)
        logger.debug(f"{self.mode}: root cost {root.cost}, lb {root.lb}, "
                     f"{root.num_conflicts} conflicts")
        return True

    def lower_bound(self) -> int:
        """Global lower bound from the current OPEN list, clamped to never decrease."""
        tree = self.tree
        if tree.open:
            if self.mode != BCBS or self.eps_low == 1:
                current = tree.min_open_key()
            else:
                current = min(tree.nodes[i].lb for _, i in tree.open_by_cost)
            self.best_lb = max(self.best_lb, current)
        return self.best_lb

    def select(self) -> CTNode:
        tree = self.tree
        if self.mode == CBS:
            return tree.nodes[tree.open[0][-1]]
        tree.sync_focal()
        if tree.focal:
            return tree.nodes[tree.focal[0][-1]]
        return tree.nodes[tree.open[0][-1]]

    def make_child(self, parent: CTNode, constraint: Constraint, conflict: Conflict,
                   deadline: Optional[Deadline]) -> Optional[CTNode]:
        """Replan only the constrained agent; None when it becomes infeasible."""
        agent = constraint.agent
        constraints = parent.constraints | {constraint}
        others = [p for p in parent.paths if p.agent != agent]
        cat = ConflictAvoidanceTable(others)
        result = self.plan(agent, [c for c in constraints if c.agent == agent], cat, deadline)
        if not result.feasible:
            return None

        paths = list(parent.paths)
        paths[agent] = result.path
        f_mins = list(parent.f_mins)
        # the parent's value bounds the more constrained problem too
        f_mins[agent] = max(result.f_min, parent.f_mins[agent])
        states = None
        if parent.low_level_states is not None:
            states = list(parent.low_level_states)
            states[agent] = result.state

        child = CTNode(id=self.tree.new_id(), parent=parent.id, constraints=constraints,
                       split_conflict=conflict, paths=paths, f_mins=f_mins,
                       low_level_states=states)
        child.refresh()
        return child

    def expand_node(self, node_id: int, deadline: Optional[Deadline] = None) -> List[int]:
        """
        Split the node on its first conflict. Returns the ids of the feasible
        children, or an empty list with the node set as incumbent when it is
        conflict-free.
        """
        tree = self.tree
        node = tree.nodes[node_id]
        if node.expanded:
            raise ContractViolation(f"CT node {node_id} is already expanded")
        if tree.is_open(node_id):
            tree.pop(node)

        conflict = find_first_conflict(node.solution, self.instance.grid.width)
        if conflict is None:
            tree.incumbent = node
            return []

        node.expanded = True
        self.hl_expanded += 1
        children = []
        for constraint in split_constraints(conflict):
            child = self.make_child(node, constraint, conflict, deadline)
            if child is None:
                logger.debug(f"{self.mode}: child of {node_id} with {constraint} infeasible")
                continue
            tree.nodes[child.id] = child
            node.children.append(child.id)
            tree.push(child)
            children.append(child.id)
        return children

    def run(self, deadline: Optional[Deadline] = None) -> SolveResult:
        deadline = deadline or Deadline()
        tree = self.tree
        started = deadline.elapsed
        try:
            if tree.root is None and not self.build_root(deadline):
                return self._result(None, INFEASIBLE, deadline, started)

            while tree.open:
                deadline.check()
                node = self.select()
                lb = self.lower_bound()
                if node.num_conflicts == 0:
                    tree.pop(node)
                    tree.incumbent = node
                    logger.debug(f"{self.mode}: solution cost {node.cost}, LB {lb}, "
                                 f"{len(tree)} CT nodes")
                    return self._result(node, SOLVED, deadline, started, lb)
                self.expand_node(node.id, deadline)

            return self._result(None, INFEASIBLE, deadline, started)
        except SearchTimeout:
            logger.info(f"{self.mode}: timed out after {self.hl_expanded} high-level "
                        f"expansions")
            return self._result(None, TIMEOUT, deadline, started)

    def _result(self, node: Optional[CTNode], status: str, deadline: Deadline,
                started: float, lb: Optional[int] = None) -> SolveResult:
        return SolveResult(
            solution=node.solution if node is not None else None,
            cost=node.cost if node is not None else None,
            lb_at_return=lb if lb is not None else (self.best_lb or None),
            hl_expanded=self.hl_expanded,
            ll_expanded=self.ll_expanded,
            elapsed=deadline.elapsed - started,
            status=status,
            nodes_generated=len(self.tree),
        )


def expand_node(search: ConstraintTreeSearch, node_id: int,
                deadline: Optional[Deadline] = None) -> List[int]:
    return search.expand_node(node_id, deadline)


def _deadline(time_limit: Optional[float]) -> Deadline:
    return Deadline(time_limit)


def cbs_solve(instance: Instance, time_limit: Optional[float] = None) -> SolveResult:
    """Optimal CBS."""
    search = ConstraintTreeSearch(instance, CBS)
    result = search.run(_deadline(time_limit))
    logger.info(f"cbs: {result.status}, cost {result.cost}, "
                f"{result.hl_expanded} high-level expansions")
    return result


def bcbs_solve(instance: Instance, eps_high, eps_low, time_limit: Optional[float] = None,
               retain: bool = False):
    """
    BCBS(eps_high, eps_low). With ``retain`` the search object is returned as
    well so its tree can be resumed.
    """
    search = ConstraintTreeSearch(instance, BCBS, eps_high, eps_low, retain=retain)
    result = search.run(_deadline(time_limit))
    logger.info(f"bcbs: {result.status}, cost {result.cost}, LB {result.lb_at_return}")
    return (result, search) if retain else result


def ecbs_solve(instance: Instance, eps, time_limit: Optional[float] = None,
               retain: bool = False):
    """
    ECBS(eps). With ``retain`` every CT node keeps its agents' focal search states
    and the search object is returned alongside the result.
    """
    search = ConstraintTreeSearch(instance, ECBS, eps, retain=retain)
    result = search.run(_deadline(time_limit))
    logger.info(f"ecbs: {result.status}, cost {result.cost}, LB {result.lb_at_return}")
    return (result, search) if retain else result
