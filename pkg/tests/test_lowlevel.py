from fractions import Fraction

import pytest

from core.cat import ConflictAvoidanceTable
from core.conflicts import EDGE, VERTEX, Constraint, Path
from core.errors import ContractViolation
from core.gridmap import parse_map
from core.instance import make_instance
from core.lowlevel import (ConstraintIndex, LowLevelState, astar_cat, focal_search,
                           resume_focal)
from tests.conftest import map_text


@pytest.fixture
def detour_instance():
    """Agent 0 crosses a 3x2 grid; its only cost-2 route goes through (1,0)."""
    grid = parse_map(map_text(['...', '...']))
    return make_instance(grid, [((0, 0), (2, 0)), ((1, 1), (0, 1))])


@pytest.fixture
def blocking_cat():
    return ConflictAvoidanceTable([Path.of(1, [(1, 1), (1, 0), (1, 1)])])


def test_astar_unconstrained_is_shortest(single_agent_instance):
    result = astar_cat(single_agent_instance, 0, [])
    assert result.path.cost == 8
    assert result.f_min == 8
    assert result.path.vertices[0] == (0, 0)
    assert result.path.goal == (4, 4)


def test_astar_vertex_constraint_forces_wait(corridor_grid):
    instance = make_instance(corridor_grid, [((0, 0), (4, 0))])
    result = astar_cat(instance, 0, [Constraint(0, VERTEX, (1, 0), 1)])
    assert result.path.cost == 5
    assert result.path.at(1) == (0, 0)


def test_astar_edge_constraint(corridor_grid):
    instance = make_instance(corridor_grid, [((0, 0), (2, 0))])
    result = astar_cat(instance, 0, [Constraint(0, EDGE, ((0, 0), (1, 0)), 1)])
    assert result.path.cost == 3
    assert (result.path.at(0), result.path.at(1)) != ((0, 0), (1, 0))


def test_astar_goal_constraint_delays_arrival(corridor_grid):
    instance = make_instance(corridor_grid, [((0, 0), (1, 0))])
    result = astar_cat(instance, 0, [Constraint(0, VERTEX, (1, 0), 3)])
    assert result.path.cost == 4
    assert result.path.at(3) != (1, 0)


def test_astar_start_constraint_is_infeasible(corridor_grid):
    instance = make_instance(corridor_grid, [((0, 0), (4, 0))])
    result = astar_cat(instance, 0, [Constraint(0, VERTEX, (0, 0), 0)])
    assert not result.feasible
    assert result.f_min is None


def test_astar_breaks_ties_toward_fewer_conflicts():
    grid = parse_map(map_text(['...', '...', '...']))
    instance = make_instance(grid, [((0, 0), (1, 1))])
    plain = astar_cat(instance, 0, [])
    assert plain.path.at(1) == (1, 0)

    cat = ConflictAvoidanceTable([Path.of(1, [(2, 0), (1, 0), (2, 0)])])
    steered = astar_cat(instance, 0, [], cat)
    assert steered.path.cost == 2
    assert steered.path.at(1) == (0, 1)


def test_constraint_index_rejects_foreign_agent():
    with pytest.raises(ContractViolation):
        ConstraintIndex(0, (0, 0), [Constraint(1, VERTEX, (0, 0), 1)])


def test_focal_trades_cost_for_fewer_conflicts(detour_instance, blocking_cat):
    result = focal_search(detour_instance, 0, [], blocking_cat, Fraction(2))
    assert result.f_min == 2
    assert 2 < result.path.cost <= 4
    assert blocking_cat.path_conflicts(result.path) == 0

    optimal = astar_cat(detour_instance, 0, [], blocking_cat)
    assert optimal.path.cost == 2


def test_focal_with_unit_bound_is_optimal(detour_instance, blocking_cat):
    result = focal_search(detour_instance, 0, [], blocking_cat, Fraction(1))
    assert result.path.cost == 2


def test_focal_bound_holds_on_random_instances(instance_factory):
    for seed in range(10):
        instance = instance_factory(seed, width=5, height=5, agents=3)
        others = [astar_cat(instance, a, []).path for a in (1, 2)]
        cat = ConflictAvoidanceTable(others)
        for eps in (Fraction(1), Fraction(3, 2), Fraction(3)):
            result = focal_search(instance, 0, [], cat, eps)
            optimum = astar_cat(instance, 0, []).path.cost
            assert result.f_min <= optimum
            assert result.path.cost <= eps * result.f_min


def test_focal_state_is_kept_only_on_request(detour_instance, blocking_cat):
    assert focal_search(detour_instance, 0, [], blocking_cat, 2).state is None
    kept = focal_search(detour_instance, 0, [], blocking_cat, 2, persist=True)
    assert isinstance(kept.state, LowLevelState)


def test_resume_with_same_bound_returns_without_expanding(detour_instance, blocking_cat):
    first = focal_search(detour_instance, 0, [], blocking_cat, Fraction(2), persist=True)
    again = resume_focal(first.state, Fraction(2))
    assert again.expansions == 0
    assert again.path == first.path


def test_resume_with_tighter_bound_shrinks_path(detour_instance, blocking_cat):
    first = focal_search(detour_instance, 0, [], blocking_cat, Fraction(2), persist=True)
    assert first.path.cost == 3
    tighter = resume_focal(first.state, Fraction(1))
    assert tighter.path.cost == 2
    assert tighter.path.cost <= tighter.f_min
    assert tighter.expansions > 0


def test_resume_cannot_loosen(detour_instance, blocking_cat):
    first = focal_search(detour_instance, 0, [], blocking_cat, Fraction(3, 2), persist=True)
    with pytest.raises(ContractViolation, match='loosen'):
        resume_focal(first.state, Fraction(2))


def test_resume_requires_previous_path(detour_instance):
    state = LowLevelState(detour_instance, 0, [], None, Fraction(2))
    with pytest.raises(ContractViolation, match='previously produced'):
        resume_focal(state, Fraction(1))


def test_low_level_bound_below_one_is_rejected(detour_instance):
    with pytest.raises(ContractViolation):
        LowLevelState(detour_instance, 0, [], None, Fraction(1, 2))
