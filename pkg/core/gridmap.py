"""
Grid world model and MovingAI ``.map`` / ``.scen`` parsers.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from numpy.typing import NDArray

from config.constants import BLOCKED_TERRAIN, PASSABLE_TERRAIN
from core.errors import ContractViolation, MapFormatError, ScenarioFormatError

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]
"""(x, y): x is the column, y the row, both 0-based."""

# up, down, left, right
_DIRECTIONS = ((0, -1), (0, 1), (-1, 0), (1, 0))


@dataclass(frozen=True, eq=False)
class GridMap:
    """
    4-connected grid. ``blocked`` has shape (height, width) and is indexed [y, x].
    """
    width: int
    height: int
    blocked: NDArray[np.bool_]
    name: str = ''
    _neighbors: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.blocked.setflags(write=False)

    def in_bounds(self, c: Cell) -> bool:
        x, y = c
        return 0 <= x < self.width and 0 <= y < self.height

    def is_passable(self, c: Cell) -> bool:
        return self.in_bounds(c) and not self.blocked[c[1], c[0]]

    def index(self, c: Cell) -> int:
        """Row-major cell index."""
        return c[1] * self.width + c[0]

    @property
    def passable_count(self) -> int:
        return int(self.width * self.height - np.count_nonzero(self.blocked))

    def passable_cells(self) -> List[Cell]:
        ys, xs = np.nonzero(~self.blocked)
        return [(int(x), int(y)) for y, x in zip(ys, xs)]

    def to_rows(self) -> List[str]:
        """Grid body using '.' for passable and '@' for blocked cells."""
        return [''.join('@' if b else '.' for b in row) for row in self.blocked]

    def __eq__(self, other):
        if not isinstance(other, GridMap):
            return NotImplemented
        return (self.width == other.width and self.height == other.height
                and np.array_equal(self.blocked, other.blocked))

    def __hash__(self):
        return hash((self.width, self.height, self.blocked.tobytes()))


@dataclass(frozen=True)
class ScenarioEntry:
    start: Cell
    goal: Cell
    optimal_length: float
    map_name: str
    bucket: int = 0


@dataclass(frozen=True)
class Scenario:
    entries: Tuple[ScenarioEntry, ...] = ()
    name: str = ''

    def __len__(self) -> int:
        return len(self.entries)


def parse_map(text: str, name: str = '') -> GridMap:
    """
    Parse MovingAI map text.

    Header lines (``type``, ``height``, ``width``) may come in any order before the
    ``map`` line. Both LF and CRLF line endings are accepted.

    Raises:
        MapFormatError: naming the offending line (and column for bad terrain).
    """
    lines = text.splitlines()
    header = {}
    body_start = None

    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line == 'map':
            body_start = line_no
            break
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ('type', 'height', 'width'):
            raise MapFormatError(f"malformed header line '{line}'", line_no)
        key, value = parts
        if key in ('height', 'width'):
            try:
                value = int(value)
            except ValueError:
                raise MapFormatError(f"{key} must be an integer, got '{value}'", line_no)
            if value <= 0:
                raise MapFormatError(f"{key} must be positive, got {value}", line_no)
        header[key] = value

    if body_start is None:
        raise MapFormatError("missing 'map' line", len(lines) + 1)
    for key in ('type', 'height', 'width'):
        if key not in header:
            raise MapFormatError(f"missing '{key}' header", body_start)

    width, height = header['width'], header['height']
    rows = lines[body_start:body_start + height]
    # trailing blank lines are tolerated, extra grid rows are not
    extra = [line for line in lines[body_start + height:] if line.strip()]
    if len(rows) < height:
        raise MapFormatError(f"expected {height} rows, found {len(rows)}",
                             body_start + len(rows) + 1)
    if extra:
        raise MapFormatError(f"expected {height} rows, found more",
                             body_start + height + 1)

    blocked = np.zeros((height, width), dtype=bool)
    for y, row in enumerate(rows):
        line_no = body_start + y + 1
        row = row.rstrip('\r')
        if len(row) != width:
            raise MapFormatError(f"expected row length {width}, got {len(row)}", line_no)
        for x, ch in enumerate(row):
            if ch in BLOCKED_TERRAIN:
                blocked[y, x] = True
            elif ch not in PASSABLE_TERRAIN:
                raise MapFormatError(f"unknown terrain character '{ch}'", line_no, x + 1)

    if blocked.all():
        raise MapFormatError("map has no passable cell", body_start)

    logger.debug(f"Parsed map {name or '<text>'}: {width}x{height}, "
                 f"{int(np.count_nonzero(blocked))} blocked")
    return GridMap(width=width, height=height, blocked=blocked, name=name)


def parse_scenario(text: str, name: str = '') -> Scenario:
    """
    Parse MovingAI scenario text (``version 1`` then 9 tab-separated fields per row).

    Raises:
        ScenarioFormatError: naming the 1-based row in the file.
    """
    lines = text.splitlines()
    first = next((i for i, line in enumerate(lines) if line.strip()), None)
    if first is None or not lines[first].strip().lower().startswith('version'):
        raise ScenarioFormatError("missing version line", (first or 0) + 1)

    entries = []
    for i in range(first + 1, len(lines)):
        line = lines[i].strip()
        if not line:
            continue
        row = i + 1
        fields = line.split('\t') if '\t' in line else line.split()
        if len(fields) != 9:
            raise ScenarioFormatError(f"expected 9 fields, got {len(fields)}", row)
        try:
            bucket = int(fields[0])
            _, _ = int(fields[2]), int(fields[3])
            sx, sy, gx, gy = (int(v) for v in fields[4:8])
        except ValueError:
            raise ScenarioFormatError("non-numeric coordinate", row)
        try:
            optimal = float(fields[8])
        except ValueError:
            raise ScenarioFormatError(f"non-numeric optimal length '{fields[8]}'", row)
        entries.append(ScenarioEntry(start=(sx, sy), goal=(gx, gy),
                                     optimal_length=optimal, map_name=fields[1],
                                     bucket=bucket))

    logger.debug(f"Parsed scenario {name or '<text>'}: {len(entries)} entries")
    return Scenario(entries=tuple(entries), name=name)


def neighbors(grid: GridMap, c: Cell) -> List[Cell]:
    """Passable 4-neighbors of ``c`` in the order up, down, left, right."""
    cached = grid._neighbors.get(c)
    if cached is not None:
        return list(cached)
    if not grid.is_passable(c):
        raise ContractViolation(f"cell {c} is blocked or out of bounds")
    x, y = c
    result = []
    for dx, dy in _DIRECTIONS:
        n = (x + dx, y + dy)
        if grid.is_passable(n):
            result.append(n)
    grid._neighbors[c] = tuple(result)
    return result
