"""
JSON-lines event log of anytime runs.

Each run contributes one ``incumbent`` line per emitted incumbent followed by a
single ``final`` line carrying the run's final status.
"""

import json
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, TextIO, Union

from core.anytime import IncumbentEvent, IncumbentLog

logger = logging.getLogger(__name__)

INCUMBENT = 'incumbent'
FINAL = 'final'

_EVENT_FIELDS = ('iteration', 't_ms', 'epsilon_bound', 'cost', 'lb',
                 'hl_expansions', 'll_expansions')


@dataclass
class RunRecord:
    run_id: str
    map: str
    scen: int
    agents: int
    algo: str
    params: Dict[str, Any] = field(default_factory=dict)
    events: List[IncumbentEvent] = field(default_factory=list)
    final_status: Optional[str] = None
    wall_ms: float = 0.0

    @property
    def solved(self) -> bool:
        return bool(self.events)

    def _header(self) -> Dict[str, Any]:
        return {'run_id': self.run_id, 'map': self.map, 'scen': self.scen,
                'agents': self.agents, 'algo': self.algo, 'params': self.params}

    def event_line(self, event: IncumbentEvent) -> str:
        obj = {'type': INCUMBENT, **self._header()}
        obj.update((name, getattr(event, name)) for name in _EVENT_FIELDS)
        return json.dumps(obj)

    def final_line(self) -> str:
        obj = {'type': FINAL, **self._header(),
               'final_status': self.final_status, 'wall_ms': self.wall_ms}
        return json.dumps(obj)

    def lines(self) -> List[str]:
        return [self.event_line(e) for e in self.events] + [self.final_line()]


class EventLogWriter:
    """Appends run records to one log file; writes from several threads are serialized."""

    def __init__(self, file_path: Union[str, Path]):
        self.path = Path(file_path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._handle: Optional[TextIO] = open(self.path, 'w', encoding='utf-8')

    def write_line(self, line: str) -> None:
        with self._lock:
            self._handle.write(line + '\n')
            self._handle.flush()

    def write_record(self, record: RunRecord) -> None:
        with self._lock:
            for line in record.lines():
                self._handle.write(line + '\n')
            self._handle.flush()

    def sink_for(self, record: RunRecord) -> 'StreamingSink':
        return StreamingSink(self, record)

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()


class StreamingSink:
    """Anytime event sink that writes each incumbent as soon as it is found."""

    def __init__(self, writer: EventLogWriter, record: RunRecord):
        self.writer = writer
        self.record = record

    def on_incumbent(self, event: IncumbentEvent, solution=None) -> None:
        self.record.events.append(event)
        self.writer.write_line(self.record.event_line(event))

    def on_finish(self, log: IncumbentLog) -> None:
        self.record.final_status = log.final_status

    def close(self, wall_ms: float) -> None:
        self.record.wall_ms = wall_ms
        self.writer.write_line(self.record.final_line())


def write_events(records: Iterable[RunRecord], file_path: Union[str, Path]) -> bool:
    """Write complete records. Returns False and logs the error on failure."""
    try:
        with EventLogWriter(file_path) as writer:
            count = 0
            for record in records:
                writer.write_record(record)
                count += 1
        logger.info(f"Wrote {count} run records to {file_path}")
        return True
    except OSError as e:
        logger.error(f"Error writing event log {file_path}: {e}")
        return False


def read_events(file_path: Union[str, Path]) -> List[RunRecord]:
    """Parse an event log back into run records, in first-appearance order."""
    records: Dict[str, RunRecord] = {}
    with open(file_path, 'r', encoding='utf-8') as f:
        for line_no, raw in enumerate(f, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as e:
                raise ValueError(f"{file_path}, line {line_no}: invalid JSON ({e.msg})")
            run_id = obj['run_id']
            record = records.get(run_id)
            if record is None:
                record = RunRecord(run_id=run_id, map=obj['map'], scen=obj['scen'],
                                   agents=obj['agents'], algo=obj['algo'],
                                   params=obj.get('params', {}))
                records[run_id] = record
            if obj['type'] == INCUMBENT:
                record.events.append(IncumbentEvent(**{k: obj[k] for k in _EVENT_FIELDS}))
            elif obj['type'] == FINAL:
                record.final_status = obj['final_status']
                record.wall_ms = obj['wall_ms']
            else:
                raise ValueError(f"{file_path}, line {line_no}: unknown record type "
                                 f"'{obj['type']}'")
    logger.info(f"Read {len(records)} run records from {file_path}")
    return list(records.values())
