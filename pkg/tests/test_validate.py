import pytest

from core.conflicts import EDGE, VERTEX, Constraint, Path, Solution
from core.gridmap import parse_map
from core.instance import make_instance
from core.validate import (CONSTRAINT_VIOLATION, COST_MISMATCH, EDGE_CONFLICT,
                           ILLEGAL_MOVE, VERTEX_CONFLICT, brute_force_optimal,
                           validate_solution)
from tests.conftest import CROSSING_OPTIMUM, map_text


@pytest.fixture
def two_lane():
    grid = parse_map(map_text(['....', '....']))
    return make_instance(grid, [((0, 0), (3, 0)), ((3, 1), (0, 1))])


def good_solution():
    return Solution.of([Path.of(0, [(0, 0), (1, 0), (2, 0), (3, 0)]),
                        Path.of(1, [(3, 1), (2, 1), (1, 1), (0, 1)])])


def test_valid_solution(two_lane):
    report = validate_solution(two_lane, good_solution(), claimed_soc=6)
    assert report.valid
    assert report.recomputed_soc == 6
    assert report.summary() == 'valid (SOC 6)'


def test_vertex_conflict_reported():
    grid = parse_map(map_text(['...']))
    instance = make_instance(grid, [((0, 0), (2, 0)), ((2, 0), (1, 0))])
    sol = Solution.of([Path.of(0, [(0, 0), (1, 0), (2, 0)]), Path.of(1, [(2, 0), (1, 0)])])
    report = validate_solution(instance, sol)
    assert VERTEX_CONFLICT in report.kinds()


def test_injected_swap_reported(two_lane):
    sol = Solution.of([Path.of(0, [(0, 0), (0, 0), (0, 1), (1, 1), (1, 0), (2, 0), (3, 0)]),
                       Path.of(1, [(3, 1), (2, 1), (1, 1), (0, 1)])])
    report = validate_solution(two_lane, sol)
    assert EDGE_CONFLICT in report.kinds()
    assert 'edge-conflict' in report.summary()


def test_stay_at_target_collision(two_lane):
    sol = Solution.of([Path.of(0, [(0, 0), (1, 0), (2, 0), (3, 0)]),
                       Path.of(1, [(3, 1), (3, 0), (3, 0)])])
    report = validate_solution(two_lane, sol)
    assert VERTEX_CONFLICT in report.kinds()
    assert ILLEGAL_MOVE in report.kinds()


@pytest.mark.parametrize('paths, fragment', [
    ([[(0, 0), (2, 0), (3, 0)], [(3, 1), (2, 1), (1, 1), (0, 1)]], 'jump'),
    ([[(1, 0), (2, 0), (3, 0)], [(3, 1), (2, 1), (1, 1), (0, 1)]], 'starts at'),
    ([[(0, 0), (1, 0)], [(3, 1), (2, 1), (1, 1), (0, 1)]], 'ends at'),
    ([[(0, 0), (1, 0), (2, 0), (3, 0)]], 'agent 1 has no path'),
])
def test_illegal_moves(two_lane, paths, fragment):
    sol = Solution.of([Path.of(i, cells) for i, cells in enumerate(paths)])
    report = validate_solution(two_lane, sol)
    assert ILLEGAL_MOVE in report.kinds()
    assert fragment in report.summary()


def test_blocked_cell_is_illegal():
    grid = parse_map(map_text(['.@.', '...']))
    instance = make_instance(grid, [((0, 0), (2, 0))])
    sol = Solution.of([Path.of(0, [(0, 0), (1, 0), (2, 0)])])
    report = validate_solution(instance, sol)
    assert 'not passable' in report.summary()


def test_cost_mismatch(two_lane):
    report = validate_solution(two_lane, good_solution(), claimed_soc=5)
    assert report.kinds() == [COST_MISMATCH]


def test_constraint_violations(two_lane):
    constraints = {0: [Constraint(0, VERTEX, (1, 0), 1)],
                   1: [Constraint(1, EDGE, ((2, 1), (1, 1)), 2)]}
    report = validate_solution(two_lane, good_solution(), constraints)
    assert report.kinds() == [CONSTRAINT_VIOLATION, CONSTRAINT_VIOLATION]


def test_joint_optimum_of_crossing_example(crossing_instance):
    assert brute_force_optimal(crossing_instance) == CROSSING_OPTIMUM


def test_joint_optimum_independent_agents(two_lane):
    assert brute_force_optimal(two_lane) == 6


def test_joint_optimum_respects_cap(crossing_instance):
    assert brute_force_optimal(crossing_instance, cost_cap=12) is None


def test_joint_optimum_corridor_swap_is_impossible(corridor_grid):
    instance = make_instance(corridor_grid, [((0, 0), (4, 0)), ((4, 0), (0, 0))])
    assert brute_force_optimal(instance) is None


def test_joint_optimum_counts_leaving_the_goal():
    # agent 0 sits on its goal in a dead end and must step aside for agent 1
    grid = parse_map(map_text(['...', '@.@']))
    instance = make_instance(grid, [((1, 0), (1, 0)), ((0, 0), (1, 1))])
    assert brute_force_optimal(instance) == 4
