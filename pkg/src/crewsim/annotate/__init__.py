from crewsim.annotate.labels import (
    UNCLASSIFIABLE,
    DeceptionLabel,
    SpeechActLabel,
    normalize_deception,
    normalize_speech_act,
)
from crewsim.annotate.backends import ChatBackend, ReplayBackend, RuleBackend
from crewsim.annotate.classify import (
    classify_deception,
    classify_speech_act,
    deception_prompt,
    deception_template,
    speech_act_prompt,
    speech_act_template,
)
from crewsim.annotate.reliability import (
    AgreementResult,
    StabilityReport,
    agreement,
    cohen_kappa,
    stability,
)
from crewsim.annotate.runs import AnnotationRun, load_run, save_run

__all__ = [
    "UNCLASSIFIABLE",
    "DeceptionLabel",
    "SpeechActLabel",
    "normalize_deception",
    "normalize_speech_act",
    "ChatBackend",
    "ReplayBackend",
    "RuleBackend",
    "classify_deception",
    "classify_speech_act",
    "deception_prompt",
    "deception_template",
    "speech_act_prompt",
    "speech_act_template",
    "AgreementResult",
    "StabilityReport",
    "agreement",
    "cohen_kappa",
    "stability",
    "AnnotationRun",
    "load_run",
    "save_run",
]
