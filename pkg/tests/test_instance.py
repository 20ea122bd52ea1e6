import math

import pytest

from core.errors import ContractViolation, ScenarioExhausted, UnreachableGoal
from core.gridmap import parse_map, parse_scenario
from core.instance import build_instance, compute_distance_field, make_instance
from tests.conftest import CROSSING_AGENTS, map_text, scen_text


def test_distance_field_is_exact(crossing_grid):
    field = compute_distance_field(crossing_grid, (4, 3))
    assert field[(4, 3)] == 0
    assert field[(0, 1)] == 6
    assert field[(1, 0)] == 6
    assert field[(3, 0)] == 4
    assert not field.is_reachable((0, 0))


def test_distance_field_marks_unreachable_cells():
    grid = parse_map(map_text(['.@.']))
    field = compute_distance_field(grid, (0, 0))
    assert field[(2, 0)] == math.inf
    assert not field.is_reachable((2, 0))


def test_build_instance_uses_first_k_entries(crossing_grid):
    scen = parse_scenario(scen_text(CROSSING_AGENTS + [((4, 0), (0, 4))]))
    instance = build_instance(crossing_grid, scen, 2)
    assert instance.num_agents == 2
    assert instance.start(1) == (1, 0)
    assert instance.goal(0) == (4, 3)


def test_build_instance_scenario_exhausted(crossing_grid):
    scen = parse_scenario(scen_text(CROSSING_AGENTS))
    with pytest.raises(ScenarioExhausted, match='requested 3 agents'):
        build_instance(crossing_grid, scen, 3)


def test_build_instance_rejects_nonpositive_k(crossing_grid):
    scen = parse_scenario(scen_text(CROSSING_AGENTS))
    with pytest.raises(ContractViolation):
        build_instance(crossing_grid, scen, 0)


def test_unreachable_goal_names_agent():
    grid = parse_map(map_text(['.@.', '.@.']))
    with pytest.raises(UnreachableGoal) as info:
        make_instance(grid, [((0, 0), (0, 1)), ((0, 1), (2, 0))])
    assert info.value.agent == 1


@pytest.mark.parametrize('agents, match', [
    ([], 'at least one agent'),
    ([((0, 0), (1, 1)), ((0, 0), (2, 2))], 'starts'),
    ([((0, 0), (1, 1)), ((2, 2), (1, 1))], 'goals'),
    ([((0, 0), (9, 9))], 'not a passable'),
])
def test_make_instance_contract(open_grid, agents, match):
    with pytest.raises(ContractViolation, match=match):
        make_instance(open_grid, agents)
