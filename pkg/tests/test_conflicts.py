import pytest

from core.conflicts import (EDGE, VERTEX, Conflict, Constraint, Path, Solution,
                            all_conflicts, count_conflicts, find_first_conflict,
                            has_conflict, split_constraints, violates)


def p(agent, *cells):
    return Path.of(agent, cells)


def test_path_cost_ignores_trailing_waits():
    path = p(0, (0, 0), (1, 0), (1, 0), (1, 0))
    assert path.cost == 1
    assert path.trimmed().vertices == ((0, 0), (1, 0))
    assert path.at(10) == (1, 0)


def test_path_cost_counts_waits_before_arrival():
    assert p(0, (0, 0), (0, 0), (1, 0)).cost == 2


def test_solution_soc_and_makespan():
    sol = Solution.of([p(0, (0, 0), (1, 0)), p(1, (3, 0), (3, 0), (2, 0), (2, 1))])
    assert sol.soc == 4
    assert sol.makespan == 3


def test_vertex_conflict_detected():
    sol = Solution.of([p(0, (0, 0), (1, 0), (2, 0)), p(1, (2, 0), (1, 0), (0, 0))])
    conflict = find_first_conflict(sol)
    assert conflict == Conflict(VERTEX, (0, 1), (1, 0), 1)


def test_edge_conflict_detected():
    sol = Solution.of([p(0, (0, 0), (1, 0)), p(1, (1, 0), (0, 0))])
    conflict = find_first_conflict(sol)
    assert conflict.kind == EDGE
    assert conflict.agents == (0, 1)
    assert conflict.location == ((0, 0), (1, 0))
    assert conflict.time == 1


def test_stay_at_target_conflict():
    # agent 0 parks at (1,0) at t=1; agent 1 passes through at t=2
    sol = Solution.of([p(0, (0, 0), (1, 0)),
                       p(1, (3, 0), (2, 0), (1, 0), (1, 1))])
    conflict = find_first_conflict(sol)
    assert conflict == Conflict(VERTEX, (0, 1), (1, 0), 2)


def test_following_is_not_a_conflict():
    sol = Solution.of([p(0, (0, 0), (1, 0), (2, 0)), p(1, (1, 0), (2, 0), (3, 0))])
    assert find_first_conflict(sol) is None
    assert count_conflicts(sol) == 0


def test_earliest_conflict_first_then_vertex_before_edge():
    sol = Solution.of([
        p(0, (0, 0), (1, 0), (2, 0)),
        p(1, (1, 0), (0, 0), (0, 1)),
        p(2, (4, 0), (3, 0), (2, 0)),
    ])
    first = find_first_conflict(sol)
    assert first.time == 1
    assert first.kind == EDGE
    assert count_conflicts(sol) == 2


def test_ties_broken_by_agent_pair():
    sol = Solution.of([
        p(0, (0, 0), (1, 0)),
        p(1, (2, 0), (1, 0)),
        p(2, (1, 1), (1, 0)),
    ])
    conflicts = all_conflicts(sol)
    assert len(conflicts) == 3
    assert find_first_conflict(sol).agents == (0, 1)


def test_split_constraints_vertex_and_edge():
    v = Conflict(VERTEX, (0, 1), (1, 1), 3)
    assert split_constraints(v) == (Constraint(0, VERTEX, (1, 1), 3),
                                    Constraint(1, VERTEX, (1, 1), 3))
    e = Conflict(EDGE, (0, 1), ((0, 0), (1, 0)), 2)
    assert split_constraints(e) == (Constraint(0, EDGE, ((0, 0), (1, 0)), 2),
                                    Constraint(1, EDGE, ((1, 0), (0, 0)), 2))


@pytest.mark.parametrize('constraint, expected', [
    (Constraint(0, VERTEX, (1, 0), 1), True),
    (Constraint(0, VERTEX, (1, 0), 2), True),   # parked at the goal
    (Constraint(0, VERTEX, (0, 0), 1), False),
    (Constraint(0, EDGE, ((0, 0), (1, 0)), 1), True),
    (Constraint(0, EDGE, ((1, 0), (0, 0)), 1), False),
])
def test_violates(constraint, expected):
    assert violates(p(0, (0, 0), (1, 0)), constraint) is expected


def test_has_conflict_tracks_exact_event():
    sol = Solution.of([p(0, (0, 0), (1, 0)), p(1, (2, 0), (1, 0))])
    conflict = find_first_conflict(sol)
    assert has_conflict(sol, conflict)
    repaired = Solution.of([p(0, (0, 0), (0, 0), (1, 0)), p(1, (2, 0), (2, 1))])
    assert not has_conflict(repaired, conflict)
