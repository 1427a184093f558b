"""Classic bully election as a pure state machine.

A detector messages every higher id. Each receiver answers Ok and, unless it is
already taking part, starts its own election; the highest live id hears nothing
back, declares itself, and broadcasts Coordinator. Ok flows strictly downward,
Election strictly upward.
"""

from __future__ import annotations

from dataclasses import replace

from .types import (
    Action,
    CancelTimer,
    DeclareCoordinator,
    Message,
    MessageKind,
    Note,
    NodeState,
    Role,
    Send,
    SetTimer,
    Status,
    TimerId,
    AWAIT_COORDINATOR_FACTOR,
    sorted_timers,
)

_ENGAGED = (Role.INITIATOR, Role.AWAITING_TAKEOVER, Role.CANDIDATE_COORDINATOR)


def _declare(state: NodeState, actions: list[Action]) -> tuple[NodeState, list[Action]]:
    """Win: announce to every peer, whatever their status."""
    actions = list(actions)
    for timer in sorted_timers(state.pending_timers):
        actions.append(CancelTimer(timer))
    actions.append(DeclareCoordinator(state.id))
    for peer in state.peers:
        actions.append(Send(Message(MessageKind.COORDINATOR, state.id, peer)))
    new = replace(
        state,
        role=Role.COORDINATOR_KNOWN,
        known_coordinator=state.id,
        pending_timers=frozenset(),
    )
    return new, actions


def start_election(state: NodeState) -> tuple[NodeState, list[Action]]:
    """Send Election to all higher peers, or win outright if there are none."""
    higher = state.higher_peers()
    if not higher:
        return _declare(state, [])
    actions: list[Action] = []
    for timer in sorted_timers(state.pending_timers):
        actions.append(CancelTimer(timer))
    for peer in higher:
        actions.append(Send(Message(MessageKind.ELECTION, state.id, peer)))
    actions.append(SetTimer(TimerId.AWAIT_OK, state.timeout))
    new = replace(
        state,
        role=Role.INITIATOR,
        pending_timers=frozenset({TimerId.AWAIT_OK}),
    )
    return new, actions


def on_detect(state: NodeState) -> tuple[NodeState, list[Action]]:
    if state.status is Status.CRASHED:
        return state, [Note(f"detect ignored: node {state.id} is crashed")]
    if state.role in _ENGAGED:
        return state, [Note(f"detect ignored: node {state.id} already in an election")]
    return start_election(state)


def _on_election(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    if msg.src > state.id:
        return state, [Note(f"election from higher id {msg.src} ignored by {state.id}")]
    actions: list[Action] = [Send(Message(MessageKind.OK, state.id, msg.src))]
    if state.role in _ENGAGED:
        # already holding an election of its own; the Ok is all the sender needs
        return state, actions
    if state.known_coordinator == state.id:
        # this node already won; re-assert to the stale sender only
        actions.append(Send(Message(MessageKind.COORDINATOR, state.id, msg.src)))
        return state, actions
    new, more = start_election(state)
    return new, actions + more


def _on_ok(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    if msg.src < state.id:
        return state, [Note(f"ok from lower id {msg.src} ignored by {state.id}")]
    if state.role is Role.INITIATOR and TimerId.AWAIT_OK in state.pending_timers:
        actions: list[Action] = [
            CancelTimer(TimerId.AWAIT_OK),
            SetTimer(TimerId.AWAIT_COORDINATOR, AWAIT_COORDINATOR_FACTOR * state.timeout),
        ]
        new = replace(
            state,
            role=Role.AWAITING_TAKEOVER,
            pending_timers=frozenset({TimerId.AWAIT_COORDINATOR}),
        )
        return new, actions
    return state, [Note(f"stale ok ignored by node {state.id}")]


def _adopt(state: NodeState, coordinator: int) -> tuple[NodeState, list[Action]]:
    actions: list[Action] = [CancelTimer(t) for t in sorted_timers(state.pending_timers)]
    new = replace(
        state,
        role=Role.COORDINATOR_KNOWN,
        known_coordinator=coordinator,
        pending_timers=frozenset(),
    )
    return new, actions


def _on_coordinator(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    if msg.src < state.id:
        # a lower id claims leadership while this node is alive: contest it
        if state.role in _ENGAGED:
            return state, [Note(f"node {state.id} already contesting claim by {msg.src}")]
        note = Note(f"node {state.id} contests coordinator claim by lower id {msg.src}")
        new, actions = start_election(state)
        return new, [note] + actions
    return _adopt(state, msg.src)


def on_message(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    if state.status is Status.CRASHED:
        return state, [Note(f"message to crashed node {state.id} ignored")]
    if msg.kind is MessageKind.ELECTION:
        return _on_election(state, msg)
    if msg.kind is MessageKind.OK:
        return _on_ok(state, msg)
    if msg.kind is MessageKind.COORDINATOR:
        return _on_coordinator(state, msg)
    return state, [Note(f"{msg.kind.value} has no classic handler; ignored by {state.id}")]


def on_timeout(state: NodeState, timer: TimerId) -> tuple[NodeState, list[Action]]:
    if timer not in state.pending_timers:
        return state, [Note(f"stale timer {timer.value} ignored by node {state.id}")]
    base = replace(state, pending_timers=state.pending_timers - {timer})
    if timer is TimerId.AWAIT_OK:
        if base.role is not Role.INITIATOR:
            return base, [Note(f"await-ok expiry in role {base.role.value}; ignored")]
        # nobody higher answered: this node wins
        return _declare(base, [])
    if timer is TimerId.AWAIT_COORDINATOR:
        # the promised takeover never announced itself; run a fresh election
        return start_election(replace(base, role=Role.IDLE))
    return base, [Note(f"timer {timer.value} has no classic handler")]
