"""Election state machines and the algorithm-generic dispatch helpers."""

from __future__ import annotations

from dataclasses import replace

from . import classic, modified
from .types import (
    Action,
    Algorithm,
    CancelTimer,
    ConfigurationError,
    DeclareCoordinator,
    Message,
    MessageKind,
    Note,
    NodeState,
    Role,
    Send,
    SetFlag,
    SetTimer,
    Status,
    TimerId,
    init_node,
)

__all__ = [
    "Action",
    "Algorithm",
    "CancelTimer",
    "ConfigurationError",
    "DeclareCoordinator",
    "Message",
    "MessageKind",
    "Note",
    "NodeState",
    "Role",
    "Send",
    "SetFlag",
    "SetTimer",
    "Status",
    "TimerId",
    "classic",
    "modified",
    "init_node",
    "on_detect",
    "on_message",
    "on_timeout",
    "on_recovery",
]


def _machine(state: NodeState):
    return classic if state.algorithm is Algorithm.CLASSIC else modified


def on_detect(state: NodeState) -> tuple[NodeState, list[Action]]:
    return _machine(state).on_detect(state)


def on_message(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    return _machine(state).on_message(state, msg)


def on_timeout(state: NodeState, timer: TimerId) -> tuple[NodeState, list[Action]]:
    return _machine(state).on_timeout(state, timer)


def on_recovery(state: NodeState, now: int) -> tuple[NodeState, list[Action]]:
    """Bring a crashed node back up.

    A revived node cannot trust anything it learned before it went down (the
    coordinator may have changed or died in the meantime), so it forgets its
    old coordinator and immediately runs its algorithm's detection behavior:
    either it wins outright or the reply chain points it at the real one.
    """
    if state.status is Status.UP:
        return state, [Note(f"recovery ignored at t={now}: node {state.id} already up")]
    revived = replace(
        state,
        status=Status.UP,
        role=Role.IDLE,
        election_flag=False,
        coordinator_var=0,
        known_coordinator=None,
        pending_timers=frozenset(),
    )
    actions: list[Action] = [Note(f"node {state.id} recovered at t={now}")]
    new, more = on_detect(revived)
    return new, actions + more
