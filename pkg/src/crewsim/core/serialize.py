"""JSON persistence for game records and map files.

Game records serialize as one JSON object per line (JSONL, UTF-8) with stable
field order, so identical games produce byte-identical lines.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Iterator

from crewsim.core.types import GameRecord, MapSpec

_DEFAULT_MAP: MapSpec | None = None


def default_map() -> MapSpec:
    """The 8-room map shipped with the package."""
    global _DEFAULT_MAP
    if _DEFAULT_MAP is None:
        text = resources.files("crewsim.data").joinpath("default_map.json").read_text("utf-8")
        _DEFAULT_MAP = MapSpec.from_dict(json.loads(text))
    return _DEFAULT_MAP


def load_map(path: str | Path) -> MapSpec:
    with open(path, encoding="utf-8") as fh:
        spec = MapSpec.from_dict(json.load(fh))
    problems = spec.validate()
    if problems:
        raise ValueError(f"invalid map file {path}: " + "; ".join(problems))
    return spec


def save_map(spec: MapSpec, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec.to_dict(), fh, indent=2)
        fh.write("\n")


def encode_record(record: GameRecord) -> str:
    """One-line JSON encoding; field order fixed by ``GameRecord.to_dict``."""
    return json.dumps(record.to_dict(), ensure_ascii=False, separators=(",", ":"))


def decode_record(line: str) -> GameRecord:
    return GameRecord.from_dict(json.loads(line))


def write_records(records: list[GameRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(encode_record(record))
            fh.write("\n")


def read_records(path: str | Path) -> Iterator[GameRecord]:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield decode_record(line)
