"""Synthetic corpus with planted effects, for pipeline-recovery tests.

Planted structure:

- crew-win log-odds = 1.8 - 1.1 * num_impostors (impostors lower win odds);
- speech-act labels: exactly 96% directives, 2% representatives,
  1% commissives, 1% expressives (up to rounding);
- deception labels: exactly round(0.90 * N) equivocation, plus small
  falsification/concealment/missing shares.

Everything else (discussions, ejections, verbosity) is seeded noise with no
planted relationship to the outcome.
"""

from __future__ import annotations

import json
import math
import random
from pathlib import Path

from crewsim.core.serialize import encode_record
from crewsim.core.types import Event, GameConfig, GameRecord, Outcome, Role

SPEECH_MIX = (("directives", 0.96), ("representatives", 0.02), ("commissives", 0.01), ("expressives", 0.01))
DECEPTION_MIX = (("equivocation", 0.90), ("falsification", 0.04), ("concealment", 0.03), ("missing", 0.03))


def _mix_counts(n: int, mix) -> list[str]:
    labels: list[str] = []
    for name, share in mix[:-1]:
        labels.extend([name] * round(share * n))
    labels.extend([mix[-1][0]] * (n - len(labels)))
    return labels


def build_synthetic_corpus(out_dir: Path, games_per_cell: int = 70, seed: int = 2024):
    rng = random.Random(seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    keys: list[str] = []
    cell = 0
    for num_crew in (4, 5, 6):
        for num_imp in (1, 2, 3):
            config = GameConfig(num_crew=num_crew, num_impostors=num_imp, seed=cell)
            records = []
            for rep in range(games_per_cell):
                game_id = f"syn{cell:02d}-{num_crew}v{num_imp}-{rep:03d}"
                crew_logit = 1.8 - 1.1 * num_imp
                crew_win = rng.random() < 1.0 / (1.0 + math.exp(-crew_logit))
                n_meetings = rng.randint(1, 4)
                meeting_rounds = sorted(rng.sample(range(1, 25), n_meetings))
                n_ejects = rng.randint(0, min(2, n_meetings))
                eject_meetings = sorted(rng.sample(range(n_meetings), n_ejects))
                end_round = meeting_rounds[-1] + rng.randint(1, 6)

                events = [Event(0, 0, "game_start", {"game_id": game_id, "label": f"{num_crew}v{num_imp}",
                                                     "seed": rep, "roles": {}, "turn_order": [], "tasks": {}})]
                n_players = num_crew + num_imp
                for mi, mround in enumerate(meeting_rounds):
                    # speaker count varies independently of the roster size so
                    # verbosity does not proxy for the planted predictors
                    speakers = rng.sample(range(n_players), rng.randint(2, min(4, n_players)))
                    for speaker in sorted(speakers):
                        role = Role.CREWMATE if speaker < num_crew else Role.IMPOSTOR
                        n_words = rng.randint(3, 14)
                        text = " ".join(["w"] * n_words)
                        events.append(
                            Event(mround, mround, "utterance", {
                                "game_id": game_id, "meeting_index": mi, "discussion_round": 0,
                                "speaker_id": speaker, "speaker_role": role.value,
                                "text": text, "word_count": n_words,
                            })
                        )
                        keys.append(f"{game_id}|{mi}|0|{speaker}")
                    if mi in eject_meetings:
                        events.append(Event(mround, mround, "ejection",
                                            {"player": rng.randrange(n_players), "meeting_index": mi}))
                outcome = Outcome("crew", "all_tasks_done") if crew_win else Outcome("impostor", "parity")
                events.append(Event(end_round, end_round, "game_end", outcome.to_dict()))
                records.append(
                    GameRecord(
                        game_id=game_id,
                        config=config,
                        seed=rep,
                        events=events,
                        outcome=outcome,
                        meeting_rounds=meeting_rounds,
                        ejection_rounds=[meeting_rounds[m] for m in eject_meetings],
                    )
                )
            path = out_dir / f"config_{cell:02d}_{num_crew}v{num_imp}.jsonl"
            path.write_text("\n".join(encode_record(r) for r in records) + "\n", "utf-8")
            cell += 1
    return keys


def write_planted_annotations(out_dir: Path, keys: list[str], seed: int = 99) -> Path:
    rng = random.Random(seed)
    ann = out_dir / "annotations"
    ann.mkdir(exist_ok=True)
    n = len(keys)
    speech = _mix_counts(n, SPEECH_MIX)
    deception = _mix_counts(n, DECEPTION_MIX)
    rng.shuffle(speech)
    rng.shuffle(deception)
    for task, labels in (("speech_act", speech), ("deception", deception)):
        path = ann / f"{task}.run0.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"task": task, "run_id": 0, "backend": "planted"}) + "\n")
            for key, label in zip(keys, labels):
                fh.write(json.dumps({"key": key, "label": label}) + "\n")
    return ann
