"""Label sets for utterance annotation, with tolerant reply normalization.

Classifier replies are trimmed, case-folded, stripped of quotes and trailing
punctuation, and accepted in singular or plural form. Anything else maps to
no label at all: a missing label is recoverable, a wrong one is not.
"""

from __future__ import annotations

from enum import Enum

UNCLASSIFIABLE = "unclassifiable"

_QUOTES = "\"'‘’“”"
_TRAILING_PUNCT = ".,!;:"


class SpeechActLabel(str, Enum):
    REPRESENTATIVES = "representatives"
    DIRECTIVES = "directives"
    COMMISSIVES = "commissives"
    EXPRESSIVES = "expressives"
    DECLARATIONS = "declarations"


class DeceptionLabel(str, Enum):
    FALSIFICATION = "falsification"
    CONCEALMENT = "concealment"
    EQUIVOCATION = "equivocation"
    MISSING = "missing"


def _clean(reply: str) -> str:
    text = " ".join(reply.split()).strip(_QUOTES).casefold()
    while text and text[-1] in _TRAILING_PUNCT:
        text = text[:-1].rstrip()
    return text


def _lookup(reply: str, table: dict[str, Enum]):
    word = _clean(reply)
    if word in table:
        return table[word]
    if word.endswith("s") and word[:-1] in table:
        return table[word[:-1]]
    if word + "s" in table:
        return table[word + "s"]
    return None


_SPEECH_ACTS = {label.value: label for label in SpeechActLabel}
_DECEPTION = {label.value: label for label in DeceptionLabel}


def normalize_speech_act(reply: str | None) -> SpeechActLabel | None:
    """Map a classifier reply to a speech-act label, or None if unusable."""
    if not reply:
        return None
    return _lookup(reply, _SPEECH_ACTS)


def normalize_deception(reply: str | None) -> DeceptionLabel | None:
    """Map a classifier reply to a deception label, or None if unusable."""
    if not reply:
        return None
    return _lookup(reply, _DECEPTION)
