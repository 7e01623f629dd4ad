"""Prompt assembly for chat-backed agents.

A prompt always carries four parts: rules and objective for the viewer's
role, the serialized observation, the legal-action menu in exact tag syntax,
and the required response format. The observation renderer never attaches a
role to any player other than the viewer.
"""

from __future__ import annotations

from crewsim.core.types import ActionKind, Role
from crewsim.engine.observation import Observation

GAME_RULES = """You are playing a hidden-role deduction game on a spaceship.
The ship has connected rooms. During task phases players act one at a time:
they can move to adjacent rooms, work on tasks, and (impostors only) kill or
use vents. A dead player leaves a body in the room. Anyone who finds a body
can report it, and anyone in the Cafeteria can call an emergency meeting.
Meetings pause the game for a fixed number of discussion rounds where every
living player speaks once per round, followed by a private vote. The player
with strictly the most votes is ejected and their role is revealed; ties or
a Skip plurality eject no one."""

CREW_INSTRUCTIONS = (
    GAME_RULES
    + """

You are a CREWMATE. You win if all crew tasks are completed or if every
impostor is ejected. You lose if the impostors ever equal the crew in number.
Work on your tasks, watch for suspicious behavior, and use meetings to vote
out impostors. Never claim to have seen something you did not observe."""
)

IMPOSTOR_INSTRUCTIONS = (
    GAME_RULES
    + """

You are an IMPOSTOR. You win when impostors equal or outnumber the remaining
crew. You lose if all tasks get completed or you are ejected. Isolate and
kill crewmates, avoid witnesses, and use meetings to deflect suspicion
without exposing yourself."""
)

RESPONSE_FORMAT = """Respond in exactly this format:
[Condensed Memory] one short paragraph summarizing everything you know so far
[Thinking Process] your private reasoning for this turn
[Action] exactly one line from the action menu"""


def role_instructions(role: Role) -> str:
    return CREW_INSTRUCTIONS if role is Role.CREWMATE else IMPOSTOR_INSTRUCTIONS


def _format_players(players) -> str:
    return ", ".join(name for _, name in players) if players else "nobody"


def render_observation(observation: Observation) -> str:
    """Serialize the viewer's observation.

    Announcement lines are prefixed with ``* `` and quoted discussion lines
    with ``> ``; everything else describes only role-free facts about other
    players.
    """
    obs = observation
    lines = [f"You are {obs.viewer_name}. Round {obs.round}."]

    if obs.meeting is None:
        lines.append(f"You are in {obs.current_room}. Adjacent rooms: {', '.join(obs.adjacent_rooms)}.")
        lines.append(f"Players in your room: {_format_players(obs.visible_players)}.")
        if obs.visible_bodies:
            bodies = ", ".join(f"{name}'s body" for _, name in obs.visible_bodies)
            lines.append(f"In this room you can see: {bodies}.")
        if obs.tasks:
            task_bits = ", ".join(
                f"task {i} in {room} ({'done' if done else 'not done'})" for i, room, done in obs.tasks
            )
            lines.append(f"Your tasks: {task_bits}.")
        if obs.viewer_role is Role.IMPOSTOR:
            ready = "ready now" if obs.kill_ready_in == 0 else f"ready in {obs.kill_ready_in} timesteps"
            lines.append(f"Your kill is {ready}.")
            if obs.vent_rooms:
                lines.append(f"Vents from here lead to: {', '.join(obs.vent_rooms)}.")
        lines.append(f"Emergency meetings you can still call: {obs.emergency_calls_left}.")
    else:
        meeting = obs.meeting
        lines.append(f"A meeting is underway: {meeting.cause}.")
        lines.append(f"Players at the table: {_format_players(meeting.attendees)}.")
        if meeting.stage == "discussion":
            lines.append(f"Discussion round {meeting.discussion_round + 1}.")
        else:
            lines.append("Discussion is over. Cast your vote now; votes are private.")
        if meeting.transcript:
            lines.append("Discussion so far:")
            for speaker, text in meeting.transcript:
                if text:
                    lines.append(f'> {speaker}: "{text}"')
                else:
                    lines.append(f"> {speaker} said nothing.")

    if obs.public_events:
        lines.append("Since your last turn:")
        lines.extend(f"* {event}" for event in obs.public_events)
    return "\n".join(lines)


def render_menu(menu) -> str:
    lines = ["Available actions:"]
    for action in menu:
        if action.kind is ActionKind.SPEAK and not action.text:
            lines.append("- SPEAK: <your message>")
        else:
            lines.append(f"- {action.tag}")
    return "\n".join(lines)


def build_prompt(observation: Observation, instructions: str | None = None, memory: str = "") -> str:
    """Full prompt for one turn; ``memory`` is the agent's previous notes."""
    if instructions is None:
        instructions = role_instructions(observation.viewer_role)
    parts = [instructions, render_observation(observation)]
    if memory:
        parts.append(f"Your previous notes:\n{memory}")
    parts.append(render_menu(observation.legal_actions))
    parts.append(RESPONSE_FORMAT)
    return "\n\n".join(parts)
