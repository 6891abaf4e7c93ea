"""JSONL game logs: one event per line, numbered by ``seq``."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, Sequence

from .events import SCHEMA_VERSION, Event


class SchemaVersionError(ValueError):
    """The log was written by a different schema version."""


def dumps_event(ev: Event, seq: int) -> str:
    return json.dumps(ev.to_dict(seq), separators=(",", ":"))


def write_log(path: str | Path, events: Sequence[Event]) -> str:
    """Write atomically; returns the sha256 of the bytes written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = "".join(dumps_event(ev, i) + "\n" for i, ev in enumerate(events)).encode("utf-8")
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    tmp.replace(path)
    return hashlib.sha256(data).hexdigest()


def read_records(path: str | Path) -> list[dict]:
    out = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(json.loads(line))
    return out


def check_version(records: Sequence[dict]) -> None:
    if not records or records[0].get("type") != "GameStarted":
        raise SchemaVersionError("log does not start with GameStarted")
    version = records[0].get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(f"log schema version {version!r}, this build reads {SCHEMA_VERSION}")


def read_log(path: str | Path) -> list[Event]:
    records = read_records(path)
    check_version(records)
    return [Event.from_dict(r) for r in records]


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def iter_logs(paths: Iterable[str | Path]) -> Iterable[tuple[str, list[Event]]]:
    for p in paths:
        yield Path(p).stem, read_log(p)
