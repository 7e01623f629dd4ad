"""Reading simulation corpora written by the experiment runner."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator

from crewsim.core.types import GameRecord


def _iter_lines(corpus_dir: Path) -> Iterator[dict]:
    consolidated = sorted(corpus_dir.glob("config_*.jsonl"))
    if consolidated:
        for path in consolidated:
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        yield json.loads(line)
        return
    for path in sorted(corpus_dir.glob("config_*/game_*.json")):
        text = path.read_text("utf-8").strip()
        if text:
            yield json.loads(text)


def iter_corpus(corpus_dir: str | Path) -> Iterator[GameRecord]:
    """Yield game records in deterministic (config, repetition) order.

    Failed-game placeholder lines are skipped; count them separately with
    ``count_failures`` when reconciling totals.
    """
    for data in _iter_lines(Path(corpus_dir)):
        if not data.get("failed"):
            yield GameRecord.from_dict(data)


def count_failures(corpus_dir: str | Path) -> int:
    return sum(1 for data in _iter_lines(Path(corpus_dir)) if data.get("failed"))
