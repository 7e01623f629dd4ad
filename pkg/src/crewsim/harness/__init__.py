from crewsim.harness.plan import ExperimentPlan, PlanEntry, default_plan
from crewsim.harness.runner import build_roster, run_experiment
from crewsim.harness.corpus import iter_corpus
from crewsim.harness.annotator import annotate_corpus
from crewsim.harness.analysis import AnalysisReport, analyze

__all__ = [
    "ExperimentPlan",
    "PlanEntry",
    "default_plan",
    "build_roster",
    "run_experiment",
    "iter_corpus",
    "annotate_corpus",
    "AnalysisReport",
    "analyze",
]
