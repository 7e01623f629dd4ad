from crewsim.core.types import (
    Action,
    ActionKind,
    ConfigIssue,
    Event,
    GameConfig,
    GameRecord,
    GameState,
    MapSpec,
    MeetingCause,
    MeetingState,
    Outcome,
    PlayerState,
    Role,
    Task,
    UtteranceRecord,
    validate_config,
    word_count,
)
from crewsim.core.serialize import (
    decode_record,
    default_map,
    encode_record,
    load_map,
    read_records,
    write_records,
)

__all__ = [
    "Action",
    "ActionKind",
    "ConfigIssue",
    "Event",
    "GameConfig",
    "GameRecord",
    "GameState",
    "MapSpec",
    "MeetingCause",
    "MeetingState",
    "Outcome",
    "PlayerState",
    "Role",
    "Task",
    "UtteranceRecord",
    "validate_config",
    "word_count",
    "decode_record",
    "default_map",
    "encode_record",
    "load_map",
    "read_records",
    "write_records",
]
