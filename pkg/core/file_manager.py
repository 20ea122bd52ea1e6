"""
Reading MovingAI benchmark files and reading/writing solution files.
"""

import logging
import re
from pathlib import Path as FilePath
from typing import List, Optional, Tuple, Union

from config.constants import SUPPORTED_TEXT_ENCODINGS
from core.conflicts import Path, Solution
from core.errors import SolutionFormatError
from core.gridmap import GridMap, Scenario, parse_map, parse_scenario

logger = logging.getLogger(__name__)

PathLike = Union[str, FilePath]

_SOLUTION_LINE = re.compile(r'^agent\s+(\d+)\s*:\s*(.*)$')
_TIMED_CELL = re.compile(r'\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)@(\d+)')


def read_text(file_path: PathLike) -> str:
    """Read a text file, trying each supported encoding in turn."""
    last_error: Optional[Exception] = None
    for encoding in SUPPORTED_TEXT_ENCODINGS:
        try:
            with open(file_path, 'r', encoding=encoding) as f:
                text = f.read()
            logger.debug(f"Read {file_path} as {encoding}")
            return text
        except UnicodeDecodeError as e:
            last_error = e
            continue
    raise ValueError(f"{file_path}: could not decode with any supported encoding "
                     f"({last_error})")


def load_map(file_path: PathLike) -> GridMap:
    grid = parse_map(read_text(file_path), name=FilePath(file_path).name)
    logger.info(f"Loaded map {FilePath(file_path).name}: {grid.width}x{grid.height}, "
                f"{grid.passable_count} passable cells")
    return grid


def load_scenario(file_path: PathLike) -> Scenario:
    scen = parse_scenario(read_text(file_path), name=FilePath(file_path).name)
    logger.info(f"Loaded scenario {FilePath(file_path).name}: {len(scen)} entries")
    return scen


def format_solution(solution: Solution) -> str:
    """One line per agent: ``agent <i>: (x,y)@t ...`` up to the agent's arrival."""
    lines = []
    for path in sorted(solution.paths, key=lambda p: p.agent):
        cells = ' '.join(f"({x},{y})@{t}" for t, (x, y) in enumerate(path.trimmed().vertices))
        lines.append(f"agent {path.agent}: {cells}")
    return '\n'.join(lines) + '\n'


def parse_solution(text: str) -> Solution:
    paths: List[Path] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        match = _SOLUTION_LINE.match(line)
        if not match:
            raise SolutionFormatError("expected 'agent <i>: (x,y)@t ...'", line_no)
        agent = int(match.group(1))
        body = match.group(2)
        cells: List[Tuple[int, int]] = []
        for expected_t, cell in enumerate(_TIMED_CELL.finditer(body)):
            x, y, t = (int(g) for g in cell.groups())
            if t != expected_t:
                raise SolutionFormatError(f"agent {agent}: timestep {t} out of order, "
                                          f"expected {expected_t}", line_no)
            cells.append((x, y))
        if not cells or _TIMED_CELL.sub('', body).strip():
            raise SolutionFormatError(f"agent {agent}: malformed cell list", line_no)
        paths.append(Path.of(agent, cells))
    return Solution.of(sorted(paths, key=lambda p: p.agent))


def write_solution(solution: Solution, file_path: PathLike) -> bool:
    try:
        target = FilePath(file_path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(format_solution(solution), encoding='utf-8')
        logger.info(f"Wrote solution with SOC {solution.soc} to {target}")
        return True
    except OSError as e:
        logger.error(f"Error writing solution to {file_path}: {e}")
        return False


def read_solution(file_path: PathLike) -> Solution:
    return parse_solution(read_text(file_path))


def find_scenarios(scen_dir: PathLike, map_name: Optional[str] = None,
                   limit: Optional[int] = None) -> List[FilePath]:
    """
    Scenario files of a benchmark directory in name order. With ``map_name`` only
    files whose name starts with the map's stem are kept.
    """
    directory = FilePath(scen_dir)
    if not directory.is_dir():
        raise FileNotFoundError(f"scenario directory not found: {directory}")
    files = sorted(directory.glob('*.scen'))
    if map_name:
        stem = FilePath(map_name).stem
        files = [f for f in files if f.name.startswith(stem)]
    if limit is not None:
        files = files[:limit]
    logger.info(f"Found {len(files)} scenario files in {directory}")
    return files
