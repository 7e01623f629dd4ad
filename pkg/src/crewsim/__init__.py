"""Seeded social-deduction game simulator with annotation and analysis tooling.

The package is organized as:

- ``crewsim.core``: shared domain types (configs, game state, event log records)
- ``crewsim.engine``: the deterministic game state machine
- ``crewsim.agents``: agent policies (scripted and chat-endpoint backed)
- ``crewsim.annotate``: utterance labeling backends and reliability metrics
- ``crewsim.stats``: from-scratch inferential statistics
- ``crewsim.harness``: experiment runner, corpus persistence, report generation
"""

from crewsim.core.types import (
    Action,
    GameConfig,
    GameRecord,
    MapSpec,
    Outcome,
    Role,
    UtteranceRecord,
    validate_config,
)
from crewsim.engine.engine import new_game, run_game

__all__ = [
    "Action",
    "GameConfig",
    "GameRecord",
    "MapSpec",
    "Outcome",
    "Role",
    "UtteranceRecord",
    "validate_config",
    "new_game",
    "run_game",
]

__version__ = "0.1.0"
