"""
Shared fixtures: small grids, the crossing example and seeded random instances.
"""

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.gridmap import parse_map  # noqa: E402
from core.instance import make_instance  # noqa: E402

CROSSING_ROWS = ['@....', '.....', '.....', '.....', '.....']
CROSSING_AGENTS = [((0, 1), (4, 3)), ((1, 0), (3, 4))]
CROSSING_OPTIMUM = 13


def map_text(rows, map_type='octile'):
    header = f"type {map_type}\nheight {len(rows)}\nwidth {len(rows[0])}\nmap\n"
    return header + '\n'.join(rows) + '\n'


def scen_text(agents, map_name='test.map', width=5, height=5):
    lines = ['version 1']
    for i, ((sx, sy), (gx, gy)) in enumerate(agents):
        dist = abs(sx - gx) + abs(sy - gy)
        lines.append(f"{i}\t{map_name}\t{width}\t{height}\t{sx}\t{sy}\t{gx}\t{gy}\t{dist}")
    return '\n'.join(lines) + '\n'


@pytest.fixture
def open_grid():
    return parse_map(map_text(['.....'] * 5), name='open5')


@pytest.fixture
def corridor_grid():
    return parse_map(map_text(['.....']), name='corridor')


@pytest.fixture
def crossing_grid():
    return parse_map(map_text(CROSSING_ROWS), name='crossing')


@pytest.fixture
def crossing_instance(crossing_grid):
    return make_instance(crossing_grid, CROSSING_AGENTS)


@pytest.fixture
def single_agent_instance(open_grid):
    return make_instance(open_grid, [((0, 0), (4, 4))])


@pytest.fixture
def crossing_files(tmp_path):
    """Map and scenario files for the crossing example."""
    map_path = tmp_path / 'crossing.map'
    map_path.write_text(map_text(CROSSING_ROWS), encoding='utf-8')
    scen_path = tmp_path / 'crossing-even-1.scen'
    scen_path.write_text(scen_text(CROSSING_AGENTS, 'crossing.map'), encoding='utf-8')
    return map_path, scen_path


def random_instance(seed, width=4, height=4, agents=3, obstacle_rate=0.15):
    """Random instance with distinct, mutually reachable starts and goals."""
    rng = random.Random(seed)
    while True:
        rows = [''.join('@' if rng.random() < obstacle_rate else '.' for _ in range(width))
                for _ in range(height)]
        grid = parse_map(map_text(rows))
        free = grid.passable_cells()
        if len(free) < 2 * agents:
            continue
        cells = rng.sample(free, 2 * agents)
        pairs = [(cells[2 * i], cells[2 * i + 1]) for i in range(agents)]
        try:
            return make_instance(grid, pairs)
        except ValueError:
            continue


@pytest.fixture
def instance_factory():
    return random_instance
