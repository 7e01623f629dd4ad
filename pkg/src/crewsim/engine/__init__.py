from crewsim.engine.engine import (
    ConfigError,
    IllegalActionError,
    apply_action,
    assign_roles,
    build_observation,
    check_termination,
    legal_actions,
    new_game,
    run_game,
    run_meeting,
    run_task_phase,
    tally_votes,
)
from crewsim.engine.observation import MeetingContext, Observation
from crewsim.engine.replay import replay_record, verify_record

__all__ = [
    "ConfigError",
    "IllegalActionError",
    "apply_action",
    "assign_roles",
    "build_observation",
    "check_termination",
    "legal_actions",
    "new_game",
    "run_game",
    "run_meeting",
    "run_task_phase",
    "tally_votes",
    "MeetingContext",
    "Observation",
    "replay_record",
    "verify_record",
]
