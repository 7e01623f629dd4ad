"""Domain types: config validation, word counting, maps, serialization."""

from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from crewsim.core.serialize import decode_record, default_map, encode_record, load_map, save_map
from crewsim.core.types import (
    Action,
    GameConfig,
    MapSpec,
    UtteranceRecord,
    Role,
    action_from_tag,
    stable_seed,
    validate_config,
    word_count,
)


# ---- config validation ----


def test_valid_grid_config_has_no_issues():
    assert validate_config(GameConfig(num_crew=3, num_impostors=1)) == []


def test_tiny_game_warns_but_is_not_a_violation():
    issues = validate_config(GameConfig(num_crew=1, num_impostors=1))
    assert issues and all(i.severity == "warning" for i in issues)
    assert any("4-8" in i.message for i in issues)


def test_impostor_majority_is_a_violation():
    issues = validate_config(GameConfig(num_crew=2, num_impostors=3))
    assert any(i.severity == "violation" and i.field == "num_impostors" for i in issues)


def test_violations_name_field_and_rule():
    issues = validate_config(GameConfig(num_crew=3, num_impostors=1, tasks_per_crew=0, seed=2**64))
    fields = {i.field for i in issues if i.severity == "violation"}
    assert fields == {"tasks_per_crew", "seed"}


# ---- word counting ----


def test_word_count_examples():
    assert word_count("") == 0
    assert word_count("I think Red vented") == 4


@given(st.lists(st.text(alphabet="abcXYZ'", min_size=1, max_size=8), max_size=10))
def test_word_count_ignores_whitespace_shape(words):
    text = "  ".join(words)
    assert word_count(text) == len(words)
    assert word_count(f"  {text}\t\n") == len(words)


def test_utterance_record_abstention_iff_empty():
    spoken = UtteranceRecord.make("g", 0, 1, 2, Role.CREWMATE, "hello there")
    assert not spoken.abstained and spoken.word_count == 2
    silent = UtteranceRecord.make("g", 0, 1, 2, Role.CREWMATE, "")
    assert silent.abstained and silent.word_count == 0


# ---- map ----


def test_default_map_is_valid():
    spec = default_map()
    assert spec.validate() == []
    assert spec.cafeteria in spec.rooms
    assert len(spec.rooms) == 8
    assert len(spec.vents) == 2


def test_map_validation_catches_problems():
    spec = MapSpec(
        rooms=("A", "B", "C"),
        adjacency=(("A", "B"), ("C", "C")),
        vents=(),
        cafeteria="Z",
    )
    problems = spec.validate()
    assert any("self-edge" in p for p in problems)
    assert any("cafeteria" in p for p in problems)


def test_map_distance_and_neighbors():
    spec = default_map()
    assert spec.distance("Cafeteria", "Cafeteria") == 0
    assert "Weapons" in spec.neighbors("Cafeteria")
    assert spec.distance("Navigation", "Electrical") >= 2  # walking, not venting


def test_map_file_round_trip(tmp_path):
    path = tmp_path / "map.json"
    save_map(default_map(), path)
    assert load_map(path) == default_map()


# ---- action tags ----


def test_action_tags_round_trip_through_parser():
    names = {"Red": 0, "Blue": 1}
    actions = [
        Action.move("Storage"),
        Action.complete_task(2),
        Action.kill(1),
        Action.vent("Navigation"),
        Action.report_body(),
        Action.call_meeting(),
        Action.speak("I think Red vented"),
        Action.vote(0),
        Action.vote(None),
    ]
    for action in actions:
        assert action_from_tag(action.tag, names) == action


def test_action_from_tag_rejects_garbage():
    assert action_from_tag("DANCE", {}) is None
    assert action_from_tag("KILL Nobody", {"Red": 0}) is None
    assert action_from_tag("", {}) is None


# ---- serialization ----


def test_record_round_trip_for_scripted_game(small_config):
    from crewsim.agents.scripted import make_scripted_roster
    from crewsim.engine.engine import run_game

    record = run_game(small_config, make_scripted_roster(small_config, "random_walker", "hunter"))
    line = encode_record(record)
    assert decode_record(line) == record
    assert "\n" not in line


def test_record_round_trip_preserves_unicode(small_config):
    from crewsim.agents.scripted import make_scripted_roster
    from crewsim.engine.engine import run_game

    record = run_game(small_config, make_scripted_roster(small_config, "stand_still", "pacifist"))
    record.events[0].data["note"] = "café ‘quotes’"
    assert decode_record(encode_record(record)) == record


def test_event_timesteps_never_decrease(small_config):
    from crewsim.agents.scripted import make_scripted_roster
    from crewsim.engine.engine import run_game

    record = run_game(small_config, make_scripted_roster(small_config, "random_walker", "hunter"))
    steps = [e.timestep for e in record.events]
    assert steps == sorted(steps)


def test_stable_seed_is_stable():
    assert stable_seed("game", 0, 1) == stable_seed("game", 0, 1)
    assert stable_seed("game", 0, 1) != stable_seed("game", 1, 0)
    assert 0 <= stable_seed("x") < 2**64
