"""Classify single utterances through a pluggable backend.

The stored prompt templates are sent verbatim with ``[TEXT]`` (and, for
deception, ``[DISCUSSION]``) substituted. Backend failures and replies
outside the label set degrade to "no label", never to a guessed class.
"""

from __future__ import annotations

import logging
from importlib import resources

from crewsim.annotate.labels import (
    DeceptionLabel,
    SpeechActLabel,
    normalize_deception,
    normalize_speech_act,
)

logger = logging.getLogger(__name__)

_templates: dict[str, str] = {}


def _load_template(filename: str) -> str:
    if filename not in _templates:
        _templates[filename] = (
            resources.files("crewsim.annotate.templates").joinpath(filename).read_text("utf-8")
        )
    return _templates[filename]


def speech_act_template() -> str:
    return _load_template("speech_act_prompt.txt")


def deception_template() -> str:
    return _load_template("deception_prompt.txt")


def speech_act_prompt(text: str) -> str:
    return speech_act_template().replace("[TEXT]", text)


def deception_prompt(text: str, discussion: str) -> str:
    return deception_template().replace("[DISCUSSION]", discussion).replace("[TEXT]", text)


def classify_speech_act(text: str, backend, key: str = "") -> SpeechActLabel | None:
    """One speech-act label, or None when the reply is unusable."""
    if not text.strip():
        raise ValueError("cannot classify an empty utterance (abstentions are excluded)")
    try:
        reply = backend.speech_act_reply(key, text)
    except Exception as exc:  # noqa: BLE001 - backend failure is a data condition
        logger.warning("speech-act backend failed for %s: %s", key or "<adhoc>", exc)
        return None
    return normalize_speech_act(reply)


def classify_deception(text: str, discussion: str, backend, key: str = "") -> DeceptionLabel:
    """One deception label; failures and unusable replies become Missing."""
    if not text.strip():
        raise ValueError("cannot classify an empty utterance (abstentions are excluded)")
    try:
        reply = backend.deception_reply(key, text, discussion)
    except Exception as exc:  # noqa: BLE001
        logger.warning("deception backend failed for %s: %s", key or "<adhoc>", exc)
        return DeceptionLabel.MISSING
    return normalize_deception(reply) or DeceptionLabel.MISSING
