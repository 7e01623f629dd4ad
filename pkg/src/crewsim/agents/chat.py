"""Generic chat-completion adapter.

Wire format: HTTP POST with JSON body ``{model, messages, temperature}`` and
JSON reply ``{choices: [{message: {content}}]}``, so any hosted or local
model behind that shape works. Configuration problems (bad URL, missing API
key) fail fast at client construction; transport problems mid-game degrade
to an empty completion, which upstream code logs as an abstention.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path

import requests

from crewsim.agents.base import Abstention, AgentResponse
from crewsim.agents.parsing import parse_response
from crewsim.agents.prompts import build_prompt, role_instructions
from crewsim.core.types import ActionKind

logger = logging.getLogger(__name__)

SYSTEM_PROMPT = "You are a player in a text-based social deduction game. Follow the rules and the response format exactly."


@dataclass
class ChatEndpointConfig:
    base_url: str
    model: str
    timeout: float = 30.0
    max_retries: int = 2
    temperature: float = 0.7
    api_key_env: str | None = None

    def validate(self) -> None:
        if not self.base_url.startswith(("http://", "https://")):
            raise ValueError(f"base_url must be an http(s) URL, got {self.base_url!r}")
        if not self.model:
            raise ValueError("model must be non-empty")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")

    def resolve_api_key(self) -> str | None:
        if not self.api_key_env:
            return None
        key = os.environ.get(self.api_key_env)
        if not key:
            raise ValueError(f"environment variable {self.api_key_env!r} is not set")
        return key

    @classmethod
    def from_file(cls, path: str | Path) -> ChatEndpointConfig:
        with open(path, encoding="utf-8") as fh:
            return cls(**json.load(fh))


class ChatClient:
    """Small retrying HTTP client over one endpoint config."""

    def __init__(self, config: ChatEndpointConfig):
        config.validate()
        self.config = config
        self.api_key = config.resolve_api_key()
        self.session = requests.Session()

    def complete(self, user: str, system: str | None = SYSTEM_PROMPT) -> str:
        """One completion; returns "" after retries are exhausted.

        Retries cover connection errors, timeouts, 5xx statuses, and
        malformed reply bodies; 4xx statuses are not retried.
        """
        messages = []
        if system:
            messages.append({"role": "system", "content": system})
        messages.append({"role": "user", "content": user})
        payload = {
            "model": self.config.model,
            "messages": messages,
            "temperature": self.config.temperature,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"

        attempts = self.config.max_retries + 1
        for attempt in range(attempts):
            try:
                reply = self.session.post(
                    self.config.base_url,
                    json=payload,
                    headers=headers,
                    timeout=self.config.timeout,
                )
            except requests.RequestException as exc:
                logger.warning("chat request failed (attempt %d/%d): %s", attempt + 1, attempts, exc)
                continue
            if reply.status_code >= 500:
                logger.warning(
                    "chat endpoint returned %d (attempt %d/%d)", reply.status_code, attempt + 1, attempts
                )
                continue
            if reply.status_code != 200:
                logger.warning("chat endpoint returned %d; not retrying", reply.status_code)
                return ""
            try:
                return reply.json()["choices"][0]["message"]["content"] or ""
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                logger.warning("malformed chat reply (attempt %d/%d): %s", attempt + 1, attempts, exc)
                continue
        return ""


def chat_complete(config: ChatEndpointConfig, prompt: str, system: str | None = SYSTEM_PROMPT) -> str:
    """One-shot convenience wrapper around ``ChatClient.complete``."""
    return ChatClient(config).complete(prompt, system)


class ChatAgent:
    """Policy backed by a chat endpoint with a rolling condensed memory.

    With ``carry_memory`` (the default) each prompt carries the agent's
    previous [Condensed Memory] section, so the model decides what history
    to keep; without it every turn is memoryless. The last (prompt, raw
    reply) exchange is exposed for the engine's event log either way.
    """

    def __init__(self, player_id: int, role, client: ChatClient, carry_memory: bool = True):
        self.player_id = player_id
        self.role = role
        self.client = client
        self.carry_memory = carry_memory
        self.memory = ""
        self.last_exchange: dict | None = None

    def _ask(self, observation) -> AgentResponse | Abstention:
        prompt = build_prompt(observation, role_instructions(self.role), memory=self.memory)
        raw = self.client.complete(prompt)
        self.last_exchange = {"prompt": prompt, "raw": raw}
        parsed = parse_response(raw, observation.legal_actions)
        if isinstance(parsed, AgentResponse) and self.carry_memory:
            self.memory = parsed.condensed_memory
        return parsed

    def decide(self, observation) -> AgentResponse | None:
        parsed = self._ask(observation)
        return parsed if isinstance(parsed, AgentResponse) else None

    def speak(self, observation) -> str:
        parsed = self._ask(observation)
        if isinstance(parsed, AgentResponse) and parsed.action.kind is ActionKind.SPEAK:
            return parsed.action.text or ""
        return ""

    def vote(self, observation) -> int | None:
        parsed = self._ask(observation)
        if isinstance(parsed, AgentResponse) and parsed.action.kind is ActionKind.VOTE:
            return parsed.action.target
        return None


def make_chat_roster(config, endpoint: ChatEndpointConfig, carry_memory: bool = True) -> list[ChatAgent]:
    """One chat agent per player, sharing a single client."""
    from crewsim.engine.engine import assign_roles

    client = ChatClient(endpoint)
    roles = assign_roles(config)
    return [ChatAgent(pid, roles[pid], client, carry_memory=carry_memory) for pid in range(config.num_players)]
