"""Annotation run objects and their JSONL persistence.

A run file starts with one metadata line, then one ``{"key", "label"}`` line
per classified utterance, append-friendly so interrupted runs can resume.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class AnnotationRun:
    """Labels from one classifier pass over a corpus."""

    task: str  # "speech_act" | "deception"
    run_id: int
    backend: str
    labels: dict[str, str] = field(default_factory=dict)

    def meta(self) -> dict:
        return {"task": self.task, "run_id": self.run_id, "backend": self.backend}


def save_run(run: AnnotationRun, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(run.meta(), sort_keys=True) + "\n")
        for key in run.labels:
            fh.write(json.dumps({"key": key, "label": run.labels[key]}) + "\n")


def load_run(path: str | Path) -> AnnotationRun:
    with open(path, encoding="utf-8") as fh:
        lines = [line for line in (ln.strip() for ln in fh) if line]
    if not lines:
        raise ValueError(f"empty annotation run file: {path}")
    meta = json.loads(lines[0])
    labels = {}
    for line in lines[1:]:
        item = json.loads(line)
        labels[item["key"]] = item["label"]
    return AnnotationRun(task=meta["task"], run_id=meta["run_id"], backend=meta["backend"], labels=labels)
