import pytest

from core.conflicts import Path, Solution
from core.errors import SolutionFormatError
from core.file_manager import (find_scenarios, format_solution, load_map, load_scenario,
                               parse_solution, read_solution, read_text, write_solution)
from tests.conftest import CROSSING_AGENTS, CROSSING_ROWS, map_text


def test_load_map_and_scenario(crossing_files):
    map_path, scen_path = crossing_files
    grid = load_map(map_path)
    assert grid.name == 'crossing.map'
    assert grid.to_rows() == CROSSING_ROWS
    scen = load_scenario(scen_path)
    assert [(e.start, e.goal) for e in scen.entries] == CROSSING_AGENTS


def test_read_text_falls_back_to_latin1(tmp_path):
    path = tmp_path / 'legacy.map'
    path.write_bytes(map_text(['..']).replace('octile', 'oct\xe9').encode('latin1'))
    assert 'oct\xe9' in read_text(path)


def test_format_solution_trims_goal_waits():
    sol = Solution.of([Path.of(1, [(3, 1), (2, 1), (2, 1)]), Path.of(0, [(0, 0), (1, 0)])])
    assert format_solution(sol) == ("agent 0: (0,0)@0 (1,0)@1\n"
                                    "agent 1: (3,1)@0 (2,1)@1\n")


def test_parse_solution_skips_comments_and_blank_lines():
    sol = parse_solution("# solved by cbs\n\nagent 1: (2,0)@0 (1,0)@1\nagent 0: (0,0)@0\n")
    assert [p.agent for p in sol.paths] == [0, 1]
    assert sol.paths[1].vertices == ((2, 0), (1, 0))


@pytest.mark.parametrize('text, match', [
    ("robot 0: (0,0)@0\n", "expected 'agent"),
    ("agent 0: (0,0)@0 (1,0)@2\n", "out of order"),
    ("agent 0: (0,0)@0 junk\n", "malformed cell list"),
    ("agent 0:\n", "malformed cell list"),
])
def test_parse_solution_errors(text, match):
    with pytest.raises(SolutionFormatError, match=match):
        parse_solution(text)


def test_solution_file_roundtrip(tmp_path):
    sol = Solution.of([Path.of(0, [(0, 1), (1, 1), (1, 2)]), Path.of(1, [(4, 4)])])
    target = tmp_path / 'out' / 'solution.txt'
    assert write_solution(sol, target)
    assert read_solution(target) == sol


def test_write_solution_reports_failure(tmp_path):
    blocker = tmp_path / 'file'
    blocker.write_text('x')
    sol = Solution.of([Path.of(0, [(0, 0)])])
    assert write_solution(sol, blocker / 'solution.txt') is False


def test_find_scenarios_filters_by_map_and_limits(tmp_path):
    for name in ('room-even-2.scen', 'room-even-1.scen', 'maze-even-1.scen', 'room.txt'):
        (tmp_path / name).write_text('version 1\n')
    found = find_scenarios(tmp_path, 'maps/room.map')
    assert [f.name for f in found] == ['room-even-1.scen', 'room-even-2.scen']
    assert len(find_scenarios(tmp_path, limit=2)) == 2


def test_find_scenarios_missing_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        find_scenarios(tmp_path / 'nope')
