"""Experiment runner, corpus annotation, analysis, and the CLI."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from crewsim.annotate.backends import RuleBackend
from crewsim.harness.analysis import analyze
from crewsim.harness.annotator import annotate_corpus, collect_items
from crewsim.harness.cli import main as cli_main
from crewsim.harness.plan import ExperimentPlan, default_plan
from crewsim.harness.runner import _run_one, run_experiment

TINY_PLAN = {
    "base_seed": 404,
    "agents": {"type": "scripted", "crew": "random_walker", "impostor": "hunter"},
    "configs": [
        {"num_crew": 3, "num_impostors": 1, "repetitions": 4},
        {"num_crew": 4, "num_impostors": 2, "repetitions": 4},
    ],
}


def tiny_plan() -> ExperimentPlan:
    return ExperimentPlan.from_dict(TINY_PLAN)


def tree_bytes(root: Path) -> dict[str, bytes]:
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


# ---- plan ----


def test_plan_round_trip(tmp_path):
    plan = tiny_plan()
    path = tmp_path / "plan.json"
    path.write_text(json.dumps(plan.to_dict()), "utf-8")
    again = ExperimentPlan.from_file(path)
    assert again.to_dict() == plan.to_dict()


def test_per_game_seeds_are_stable_and_distinct():
    plan = tiny_plan()
    assert plan.game_seed(0, 0) == tiny_plan().game_seed(0, 0)
    seeds = {plan.game_seed(ci, rep) for ci in range(2) for rep in range(4)}
    assert len(seeds) == 8
    assert plan.game_config(1, 2).seed == plan.game_seed(1, 2)


def test_default_plan_is_the_full_grid():
    plan = default_plan()
    assert len(plan.entries) == 11
    assert sum(e.repetitions for e in plan.entries) == 1100
    labels = [e.config.label() for e in plan.entries]
    for named in ("3v1", "6v1", "5v2", "5v3"):
        assert named in labels
    sizes = sorted({e.config.num_players for e in plan.entries})
    assert sizes == [4, 5, 6, 7, 8]


def test_plan_rejects_bad_fields():
    with pytest.raises(ValueError):
        ExperimentPlan.from_dict({"configs": []})
    with pytest.raises(ValueError):
        ExperimentPlan.from_dict({"configs": [{"num_crew": 3, "num_impostors": 1, "bogus": 2}]})


# ---- runner ----


def test_run_experiment_layout_and_determinism(tmp_path):
    first = run_experiment(tiny_plan(), tmp_path / "a")
    second = run_experiment(tiny_plan(), tmp_path / "b")
    assert tree_bytes(first) == tree_bytes(second)
    assert (first / "config_00_3v1.jsonl").exists()
    assert len(list((first / "config_00_3v1").glob("game_*.json"))) == 4
    summary = json.loads((first / "summary.json").read_text())
    assert summary["config_00_3v1"]["games"] == 4


def test_run_experiment_resume_regenerates_only_missing(tmp_path):
    out = run_experiment(tiny_plan(), tmp_path / "corpus")
    baseline = tree_bytes(out)
    (out / "config_00_3v1" / "game_0001.json").unlink()
    (out / "config_01_4v2" / "game_0003.json").unlink()
    marker = out / "config_00_3v1" / "game_0000.json"
    stamp = marker.stat().st_mtime_ns
    run_experiment(tiny_plan(), out)
    assert tree_bytes(out) == baseline
    assert marker.stat().st_mtime_ns == stamp  # untouched on resume


def test_parallel_run_matches_serial(tmp_path):
    serial = run_experiment(tiny_plan(), tmp_path / "serial", workers=1)
    parallel = run_experiment(tiny_plan(), tmp_path / "parallel", workers=3)
    assert tree_bytes(serial) == tree_bytes(parallel)


def test_crashing_game_is_recorded_as_failure(tmp_path):
    path = tmp_path / "game_0000.json"
    _, error = _run_one(
        tiny_plan().game_config(0, 0).to_dict(), {"type": "no-such-kind"}, "gid", str(path)
    )
    assert error is not None
    data = json.loads(path.read_text())
    assert data["failed"] is True and data["game_id"] == "gid"


# ---- annotation over a corpus ----


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    return run_experiment(tiny_plan(), out / "corpus")


def test_annotate_corpus_rule_backend_is_stable(corpus, tmp_path):
    out = annotate_corpus(corpus, RuleBackend(), runs=3, out_dir=tmp_path / "ann")
    stability = json.loads((out / "stability_speech_act.json").read_text())
    assert stability["identical_fraction"] == 1.0
    assert stability["two_of_three_fraction"] == 0.0
    merged = [json.loads(line) for line in (out / "annotations.jsonl").read_text().splitlines()]
    assert merged and all("speech_act_run0" in row and "deception_run2" in row for row in merged)
    items = collect_items(corpus)
    assert len(merged) == len(items)


def test_annotate_corpus_resumes_partial_run(corpus, tmp_path):
    out_dir = tmp_path / "ann"
    annotate_corpus(corpus, RuleBackend(), runs=1, out_dir=out_dir)
    complete = (out_dir / "speech_act.run0.jsonl").read_text()
    lines = complete.splitlines()
    truncated = "\n".join(lines[: len(lines) // 2]) + "\n"
    (out_dir / "speech_act.run0.jsonl").write_text(truncated, "utf-8")
    annotate_corpus(corpus, RuleBackend(), runs=1, out_dir=out_dir)
    resumed = (out_dir / "speech_act.run0.jsonl").read_text()
    assert sorted(resumed.splitlines()) == sorted(complete.splitlines())


def test_annotate_corpus_two_runs_skips_stability(corpus, tmp_path):
    notices = []
    out = annotate_corpus(corpus, RuleBackend(), runs=2, out_dir=tmp_path / "ann", echo=notices.append)
    assert not (out / "stability_speech_act.json").exists()
    assert any("skipped" in n for n in notices)


def test_discussion_window_widens_context(corpus):
    per_meeting = {i.key: i.discussion for i in collect_items(corpus, "meeting")}
    per_game = {i.key: i.discussion for i in collect_items(corpus, "game")}
    assert per_meeting.keys() == per_game.keys()
    assert all(per_meeting[k] in per_game[k] for k in per_meeting)
    assert any(len(per_game[k]) > len(per_meeting[k]) for k in per_meeting)
    with pytest.raises(ValueError):
        collect_items(corpus, "universe")


# ---- analysis ----


def test_analyze_without_annotations_marks_sections(corpus):
    report = analyze(corpus)
    assert report.sections["speech_act_by_role"] == {
        "insufficient_data": "no speech_act annotations supplied"
    }
    assert "insufficient_data" in report.sections["deception_proportions"]
    assert "insufficient_data" not in report.sections["win_rates"]


def test_analyze_zero_meeting_corpus(tmp_path):
    plan = ExperimentPlan.from_dict(
        {
            "base_seed": 7,
            "agents": {"type": "scripted", "crew": "stand_still", "impostor": "hunter"},
            "configs": [{"num_crew": 3, "num_impostors": 1, "repetitions": 6, "max_rounds": 30}],
        }
    )
    corpus = run_experiment(plan, tmp_path / "corpus")
    report = analyze(corpus)
    meeting = report.sections["meeting_ecdf"]["3v1"]
    assert meeting["discussions"]["n"] == 0
    assert meeting["discussions"]["note"] == "no meetings"
    regression = report.sections["win_regression"]
    if "insufficient_data" not in regression:
        assert "num_discussions" in regression["dropped_constant"]
        assert any("constant predictors" in note for note in report.notes)


def test_analyze_report_is_deterministic(corpus, tmp_path):
    ann = annotate_corpus(corpus, RuleBackend(), runs=1, out_dir=tmp_path / "ann")
    a = analyze(corpus, ann)
    b = analyze(corpus, ann)
    assert a.to_json() == b.to_json()


def test_role_odds_orientation_matches_by_role_counts(corpus, tmp_path):
    from crewsim.stats import odds_ratio

    ann = annotate_corpus(corpus, RuleBackend(), runs=1, out_dir=tmp_path / "ann")
    sections = analyze(corpus, ann).sections
    by_role = sections["speech_act_by_role"]
    imp_total = by_role["impostor"]["total"]
    crew_total = by_role["crewmate"]["total"]
    for act, cell in sections["speech_act_role_odds"].items():
        if "odds_ratio" not in cell:
            continue
        imp = by_role["impostor"]["acts"][act]["count"]
        crew = by_role["crewmate"]["acts"][act]["count"]
        expected = odds_ratio(imp, imp_total - imp, crew, crew_total - crew).odds_ratio
        assert cell["odds_ratio"] == pytest.approx(expected, rel=1e-12)
        assert cell["groups"] == ["impostor", "crewmate"]


def test_analyze_counts_reconcile(corpus, tmp_path):
    ann = annotate_corpus(corpus, RuleBackend(), runs=1, out_dir=tmp_path / "ann")
    counts = analyze(corpus, ann).sections["counts"]
    assert counts["abstentions"] + counts["spoken"] == counts["utterance_opportunities"]
    assert counts["speech_act"]["reconciles"]
    assert counts["deception"]["reconciles"]
    assert counts["games"] == counts["completed"] + counts["timeouts"]


# ---- golden snapshot ----

GOLDEN = Path(__file__).parent / "data" / "golden"


def test_golden_pipeline_snapshot(tmp_path):
    """The bundled corpus/annotations/report regenerate byte-identically."""
    plan = ExperimentPlan.from_file(Path(__file__).parent / "data" / "golden_plan.json")
    corpus = run_experiment(plan, tmp_path / "corpus")
    ann = annotate_corpus(corpus, RuleBackend(), runs=3, out_dir=tmp_path / "annotations")
    analyze(corpus, ann, out_dir=tmp_path / "report")
    for part in ("corpus", "annotations", "report"):
        fresh = tree_bytes(tmp_path / part)
        frozen = tree_bytes(GOLDEN / part)
        assert fresh.keys() == frozen.keys(), part
        mismatched = [name for name in frozen if fresh[name] != frozen[name]]
        assert mismatched == [], f"{part}: {mismatched}"


# ---- CLI ----


def test_cli_simulate_annotate_analyze_replay(tmp_path, capsys):
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps(TINY_PLAN), "utf-8")
    corpus = tmp_path / "corpus"
    assert cli_main(["simulate", "--plan", str(plan_path), "--out", str(corpus)]) == 0
    assert cli_main(["annotate", "--corpus", str(corpus), "--backend", "rules", "--runs", "3"]) == 0
    report_dir = tmp_path / "report"
    assert (
        cli_main(
            [
                "analyze",
                "--corpus",
                str(corpus),
                "--annotations",
                str(corpus / "annotations"),
                "--out",
                str(report_dir),
            ]
        )
        == 0
    )
    assert (report_dir / "report.json").exists()
    capsys.readouterr()
    assert cli_main(["replay", "--game", str(corpus / "config_00_3v1.jsonl"), "--verify"]) == 0
    out = capsys.readouterr().out
    assert "game over" in out


def test_cli_replay_reports_index_bounds(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", "utf-8")
    assert cli_main(["replay", "--game", str(empty)]) == 2
