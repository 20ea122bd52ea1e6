"""
Anytime drivers over the constraint-tree searches.

Each driver repeatedly tightens the suboptimality bound with ``next_epsilon`` and
either restarts the search or keeps growing the previous constraint tree,
depending on the restart policy. Incumbents are streamed to an optional sink.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Protocol, Union

from config.constants import DEFAULT_CIC, DEFAULT_EPS0, DEFAULT_TIME_LIMIT
from core.cat import ConflictAvoidanceTable
from core.conflicts import Solution, has_conflict
from core.deadline import Deadline
from core.errors import ContractViolation, SearchTimeout
from core.highlevel import (BCBS, ECBS, INFEASIBLE, TIMEOUT, CTNode,
                            ConstraintTreeSearch)
from core.instance import Instance
from core.lowlevel import resume_focal

logger = logging.getLogger(__name__)

ABCBS = 'abcbs'
AECBS = 'aecbs'

RESTART_EVERY = 'every'
RESTART_ALTERNATE = 'alternate'
RESTART_NEVER = 'never'

OPTIMAL_PROVEN = 'optimal-proven'
BUDGET_EXHAUSTED = 'budget-exhausted'
NO_SOLUTION = 'no-solution'


@dataclass
class AnytimeConfig:
    algorithm: str = AECBS
    eps0: Union[Fraction, float, int] = DEFAULT_EPS0
    res: str = RESTART_NEVER
    cic: bool = DEFAULT_CIC
    deadline: Optional[float] = DEFAULT_TIME_LIMIT

    def __post_init__(self):
        if self.algorithm not in (ABCBS, AECBS):
            raise ContractViolation(f"unknown anytime algorithm '{self.algorithm}'")
        if self.res not in (RESTART_EVERY, RESTART_ALTERNATE, RESTART_NEVER):
            raise ContractViolation(f"unknown restart policy '{self.res}'")
        self.eps0 = Fraction(self.eps0)
        if self.eps0 < 1:
            raise ContractViolation(f"eps0 must be >= 1, got {self.eps0}")


@dataclass(frozen=True)
class IncumbentEvent:
    iteration: int
    t_ms: float
    epsilon_bound: float
    cost: int
    lb: int
    hl_expansions: int
    ll_expansions: int


@dataclass
class IncumbentLog:
    """Append-only record of one anytime run; consistent after every append."""
    events: List[IncumbentEvent] = field(default_factory=list)
    final_status: Optional[str] = None
    best_solution: Optional[Solution] = None
    epsilons: List[Fraction] = field(default_factory=list)
    iterations: int = 0
    timed_out: bool = False

    @property
    def best_cost(self) -> Optional[int]:
        return self.events[-1].cost if self.events else None

    @property
    def best_bound(self) -> Optional[float]:
        return self.events[-1].epsilon_bound if self.events else None


class EventSink(Protocol):
    def on_incumbent(self, event: IncumbentEvent, solution: Solution) -> None: ...

    def on_finish(self, log: IncumbentLog) -> None: ...


def next_epsilon(cost: int, lb) -> Optional[Fraction]:
    """
    Bound for the next iteration, or None when ``cost`` is already proven optimal.
    Costs are integers, so (cost - 1) / lb admits exactly the strictly better solutions.
    """
    lb = Fraction(lb)
    if cost < lb:
        raise ContractViolation(f"cost {cost} below lower bound {lb}")
    if cost <= math.ceil(lb):
        return None
    return max(Fraction(1), Fraction(cost - 1) / lb)


@dataclass
class RepairReport:
    nodes_repaired: int = 0
    agents_replanned: int = 0
    nodes_pruned: int = 0
    subtrees_cut: int = 0
    nodes_reopened: int = 0


def _repair_node(search: ConstraintTreeSearch, node: CTNode, eps_new: Fraction,
                 deadline: Optional[Deadline], report: RepairReport) -> bool:
    states = node.low_level_states
    if states is None:
        raise ContractViolation(f"CT node {node.id} has no saved low-level states")
    changed = False
    for agent, path in enumerate(node.paths):
        if path.cost <= eps_new * node.f_mins[agent]:
            continue
        others = [p for p in node.paths if p.agent != agent]
        result = resume_focal(states[agent], eps_new, ConflictAvoidanceTable(others),
                              deadline)
        search.ll_expanded += result.expansions
        report.agents_replanned += 1
        if not result.feasible:
            return False
        node.paths[agent] = result.path
        node.f_mins[agent] = max(node.f_mins[agent], result.f_min)
        changed = True
    if changed:
        node.refresh()
    return True


def repair_ct(search: ConstraintTreeSearch, eps_new, cic: bool,
              deadline: Optional[Deadline] = None) -> RepairReport:
    """
    Rebuild the stored paths of a kept ECBS tree top-down for a tighter bound.

    Nodes are visited breadth-first, so every parent is repaired before its
    children. With ``cic``, children whose splitting conflict vanished from the
    repaired parent are cut together with their subtrees and the parent goes back
    to OPEN. All unexpanded nodes form the new OPEN list.
    """
    eps_new = Fraction(eps_new)
    tree = search.tree
    report = RepairReport()
    tree.clear_open()
    tree.incumbent = None
    if tree.root is None:
        return report

    queue = deque([tree.root])
    while queue:
        node_id = queue.popleft()
        if node_id not in tree.nodes:
            continue
        node = tree.nodes[node_id]
        if not _repair_node(search, node, eps_new, deadline, report):
            report.nodes_pruned += tree.delete_subtree(node_id)
            if node_id == tree.root:
                tree.root = None
            continue
        report.nodes_repaired += 1

        if cic and node.children:
            solution = node.solution
            stale = [c for c in node.children
                     if not has_conflict(solution, tree.nodes[c].split_conflict)]
            if stale:
                for child in list(node.children):
                    report.subtrees_cut += 1
                    report.nodes_pruned += tree.delete_subtree(child)
                node.expanded = False
                report.nodes_reopened += 1
        queue.extend(node.children)

    for node in tree.nodes.values():
        if not node.expanded:
            tree.push(node)
    search.tree.epsilon = eps_new
    logger.debug(f"Repair to {float(eps_new):.4f}: {report}")
    return report


def _restarts(res: str, iteration: int) -> bool:
    if res == RESTART_EVERY:
        return True
    if res == RESTART_ALTERNATE:
        return iteration % 2 == 1
    return iteration == 1


class _AnytimeRun:
    """Shared iteration loop of both anytime drivers."""

    def __init__(self, instance: Instance, cfg: AnytimeConfig, sink: Optional[EventSink],
                 mode: str):
        self.instance = instance
        self.cfg = cfg
        self.sink = sink
        self.mode = mode
        self.log = IncumbentLog()
        self.deadline = Deadline(cfg.deadline)
        self.search: Optional[ConstraintTreeSearch] = None
        self.lb = 0
        self._hl_base = 0
        self._ll_base = 0

    @property
    def hl_expansions(self) -> int:
        return self._hl_base + (self.search.hl_expanded if self.search else 0)

    @property
    def ll_expansions(self) -> int:
        return self._ll_base + (self.search.ll_expanded if self.search else 0)

    def _fresh_search(self, eps: Fraction) -> None:
        if self.search is not None:
            self._hl_base += self.search.hl_expanded
            self._ll_base += self.search.ll_expanded
        retain = self.mode == ECBS and self.cfg.res != RESTART_EVERY
        self.search = ConstraintTreeSearch(self.instance, self.mode, eps, retain=retain)

    def _reuse_search(self, eps: Fraction) -> None:
        if self.mode == ECBS:
            report = repair_ct(self.search, eps, self.cfg.cic, self.deadline)
            logger.info(f"Repaired CT for eps {float(eps):.4f}: "
                        f"{report.agents_replanned} agents replanned, "
                        f"{report.subtrees_cut} subtrees cut")
        self.search.set_epsilon(eps)

    def _emit(self, iteration: int, cost: int, solution: Optional[Solution]) -> None:
        bound = Fraction(cost, self.lb) if self.lb else Fraction(1)
        if self.log.events and (cost > self.log.best_cost
                                or float(bound) >= self.log.best_bound):
            return
        if solution is not None:
            self.log.best_solution = solution
        event = IncumbentEvent(iteration=iteration, t_ms=self.deadline.elapsed_ms,
                               epsilon_bound=float(bound), cost=cost, lb=self.lb,
                               hl_expansions=self.hl_expansions,
                               ll_expansions=self.ll_expansions)
        self.log.events.append(event)
        logger.info(f"{self.cfg.algorithm} iteration {iteration}: cost {cost}, "
                    f"LB {self.lb}, bound {float(bound):.4f} at {event.t_ms:.0f} ms")
        if self.sink is not None:
            self.sink.on_incumbent(event, self.log.best_solution)

    def _finish(self, status: str) -> IncumbentLog:
        self.log.final_status = status
        logger.info(f"{self.cfg.algorithm} finished: {status} after "
                    f"{self.log.iterations} iterations, best cost {self.log.best_cost}")
        if self.sink is not None:
            self.sink.on_finish(self.log)
        return self.log

    def execute(self) -> IncumbentLog:
        eps = self.cfg.eps0
        iteration = 0
        while True:
            iteration += 1
            self.log.iterations = iteration
            self.log.epsilons.append(eps)
            try:
                if self.search is None or _restarts(self.cfg.res, iteration):
                    self._fresh_search(eps)
                else:
                    self._reuse_search(eps)
            except SearchTimeout:
                self.log.timed_out = True
                return self._finish(BUDGET_EXHAUSTED if self.log.events else NO_SOLUTION)
            result = self.search.run(self.deadline)
            best = self.log.best_cost

            if result.status == TIMEOUT:
                self.log.timed_out = True
                return self._finish(BUDGET_EXHAUSTED if best is not None else NO_SOLUTION)
            if result.status == INFEASIBLE:
                if best is None:
                    return self._finish(NO_SOLUTION)
                # nothing cheaper than the incumbent is left in the tree
                self.lb = best
                self._emit(iteration, best, None)
                return self._finish(OPTIMAL_PROVEN)

            improved = best is None or result.cost < best
            incumbent = result.cost if improved else best
            self.lb = min(max(self.lb, result.lb_at_return), incumbent)
            self._emit(iteration, incumbent, result.solution if improved else None)

            eps = next_epsilon(incumbent, self.lb)
            if eps is None:
                return self._finish(OPTIMAL_PROVEN)
            if self.deadline.is_expired:
                self.log.timed_out = True
                return self._finish(BUDGET_EXHAUSTED)


def anytime_bcbs(instance: Instance, cfg: AnytimeConfig,
                 sink: Optional[EventSink] = None) -> IncumbentLog:
    """Anytime BCBS(eps, 1): optimal low level, focal high level with CT reuse."""
    if cfg.algorithm != ABCBS:
        raise ContractViolation(f"anytime_bcbs needs algorithm '{ABCBS}'")
    return _AnytimeRun(instance, cfg, sink, BCBS).execute()


def anytime_ecbs(instance: Instance, cfg: AnytimeConfig,
                 sink: Optional[EventSink] = None) -> IncumbentLog:
    """Anytime ECBS: naive restarts, or tree reuse with top-down repair."""
    if cfg.algorithm != AECBS:
        raise ContractViolation(f"anytime_ecbs needs algorithm '{AECBS}'")
    if cfg.res == RESTART_EVERY and not cfg.cic:
        logger.warning("cic=False has no effect when every iteration restarts")
    return _AnytimeRun(instance, cfg, sink, ECBS).execute()


def run_anytime(instance: Instance, cfg: AnytimeConfig,
                sink: Optional[EventSink] = None) -> IncumbentLog:
    if cfg.algorithm == ABCBS:
        return anytime_bcbs(instance, cfg, sink)
    return anytime_ecbs(instance, cfg, sink)
