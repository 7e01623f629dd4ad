"""Structured-response parsing and menu resolution.

A usable response carries three bracketed sections, in any order and any
capitalization::

    [Condensed Memory] ...
    [Thinking Process] ...
    [Action] <one line resolved against the offered menu>

Anything else (missing sections, empty output, an action not on the menu, an
ambiguous prefix) is an ``Abstention`` carrying the raw text for the log.
Abstaining on ambiguity is deliberate: a wrong guess is worse than a no-op.
"""

from __future__ import annotations

import re
from typing import Sequence

from crewsim.agents.base import Abstention, AgentResponse
from crewsim.core.types import Action, ActionKind

_SECTION = re.compile(r"\[\s*(condensed\s+memory|thinking\s+process|action)\s*\]", re.IGNORECASE)
_SPEAK_LINE = re.compile(r"speak\b\s*[:,]?\s*(.*)$", re.IGNORECASE)
_TRAILING_PUNCT = ".,!;:"


def _normalize(text: str) -> str:
    text = " ".join(text.split()).casefold()
    while text and text[-1] in _TRAILING_PUNCT:
        text = text[:-1].rstrip()
    return text


def _extract_sections(raw: str) -> dict[str, str] | None:
    matches = list(_SECTION.finditer(raw))
    if not matches:
        return None
    sections: dict[str, str] = {}
    for i, match in enumerate(matches):
        name = " ".join(match.group(1).lower().split())
        end = matches[i + 1].start() if i + 1 < len(matches) else len(raw)
        sections.setdefault(name, raw[match.end():end].strip())
    if {"condensed memory", "thinking process", "action"} <= sections.keys():
        return sections
    return None


def resolve_action(line: str, menu: Sequence[Action]) -> Action | None:
    """Match one action line against the menu.

    SPEAK keeps its payload verbatim; everything else matches the canonical
    tag exactly (case-insensitive, trailing punctuation ignored) or as a
    unique prefix of exactly one tag.
    """
    line = " ".join(line.split())
    if not line:
        return None
    if any(a.kind is ActionKind.SPEAK for a in menu):
        match = _SPEAK_LINE.match(line)
        if match:
            return Action.speak(match.group(1).strip())
    norm = _normalize(line)
    if not norm:
        return None
    tagged = [(action, _normalize(action.tag)) for action in menu if action.kind is not ActionKind.SPEAK]
    for action, tag in tagged:
        if tag == norm:
            return action
    prefixed = [action for action, tag in tagged if tag.startswith(norm)]
    if len(prefixed) == 1:
        return prefixed[0]
    return None


def parse_response(raw: str | None, menu: Sequence[Action]) -> AgentResponse | Abstention:
    """Parse raw agent output into an ``AgentResponse``, or abstain."""
    if not raw or not raw.strip():
        return Abstention(raw or "")
    sections = _extract_sections(raw)
    if sections is None:
        return Abstention(raw)
    action_line = next((ln for ln in sections["action"].splitlines() if ln.strip()), "")
    action = resolve_action(action_line, menu)
    if action is None:
        return Abstention(raw)
    return AgentResponse(
        condensed_memory=sections["condensed memory"],
        thinking=sections["thinking process"],
        action=action,
    )


def render_response(response: AgentResponse) -> str:
    """Canonical text form of a response; ``parse_response`` inverts it."""
    return (
        f"[Condensed Memory] {response.condensed_memory}\n"
        f"[Thinking Process] {response.thinking}\n"
        f"[Action] {response.action.tag}"
    )
