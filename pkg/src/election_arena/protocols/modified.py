"""Modified bully election as a pure state machine.

Only the detector holds an election; receivers set their election flag, answer
Ok, and stay put. The detector remembers the highest responder in its
coordinator variable and nominates it with InformCoordinator. The nominee
cross-checks every strictly higher process before broadcasting; a live higher
process answers the probe and takes the candidacy over itself.
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
    SetFlag,
    SetTimer,
    Status,
    TimerId,
    AWAIT_COORDINATOR_FACTOR,
    FLAG_LEASE_FACTOR,
    sorted_timers,
)


def _flag_on(state: NodeState) -> tuple[NodeState, list[Action]]:
    """Raise the election flag and arm its fail-safe lease."""
    if state.election_flag:
        return state, []
    new = replace(
        state,
        election_flag=True,
        pending_timers=state.pending_timers | {TimerId.FLAG_LEASE},
    )
    actions: list[Action] = [
        SetFlag(True),
        SetTimer(TimerId.FLAG_LEASE, FLAG_LEASE_FACTOR * state.timeout),
    ]
    return new, actions


def _declare(state: NodeState, actions: list[Action]) -> tuple[NodeState, list[Action]]:
    actions = list(actions)
    for timer in sorted_timers(state.pending_timers):
        actions.append(CancelTimer(timer))
    actions.append(DeclareCoordinator(state.id))
    if state.election_flag:
        actions.append(SetFlag(False))
    for peer in state.peers:
        actions.append(Send(Message(MessageKind.COORDINATOR, state.id, peer)))
    new = replace(
        state,
        role=Role.COORDINATOR_KNOWN,
        known_coordinator=state.id,
        coordinator_var=state.id,
        election_flag=False,
        pending_timers=frozenset(),
    )
    return new, actions


def start_election(state: NodeState) -> tuple[NodeState, list[Action]]:
    higher = state.higher_peers()
    if not higher:
        return _declare(state, [])
    actions: list[Action] = []
    for timer in sorted_timers(state.pending_timers):
        actions.append(CancelTimer(timer))
    flagged, flag_actions = _flag_on(state)
    actions.extend(flag_actions)
    for peer in higher:
        actions.append(Send(Message(MessageKind.ELECTION, state.id, peer)))
    actions.append(SetTimer(TimerId.AWAIT_OKS, state.timeout))
    new = replace(
        flagged,
        role=Role.INITIATOR,
        coordinator_var=0,
        pending_timers=frozenset({TimerId.AWAIT_OKS, TimerId.FLAG_LEASE}),
    )
    return new, actions


def on_detect(state: NodeState) -> tuple[NodeState, list[Action]]:
    if state.status is Status.CRASHED:
        return state, [Note(f"detect ignored: node {state.id} is crashed")]
    if state.election_flag:
        return state, [Note(f"election initiation suppressed: node {state.id} flag is set")]
    if state.role in (Role.INITIATOR, Role.CANDIDATE_COORDINATOR):
        return state, [Note(f"detect ignored: node {state.id} already in an election")]
    return start_election(state)


def _become_candidate(state: NodeState) -> tuple[NodeState, list[Action]]:
    """Nominated (or taking over): probe everyone higher before claiming the win."""
    flagged, actions = _flag_on(state)
    higher = flagged.higher_peers()
    if not higher:
        return _declare(flagged, actions)
    for peer in higher:
        actions.append(Send(Message(MessageKind.CROSS_CHECK, flagged.id, peer)))
    actions.append(SetTimer(TimerId.AWAIT_CROSS_CHECK, flagged.timeout))
    new = replace(
        flagged,
        role=Role.CANDIDATE_COORDINATOR,
        pending_timers=flagged.pending_timers | {TimerId.AWAIT_CROSS_CHECK},
    )
    return new, actions


def _on_election(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    if msg.src > state.id:
        return state, [Note(f"election from higher id {msg.src} ignored by {state.id}")]
    new, actions = _flag_on(state)
    actions.append(Send(Message(MessageKind.OK, new.id, msg.src)))
    return new, actions


def _on_ok(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    if state.role is Role.INITIATOR:
        if msg.src <= state.coordinator_var:
            return state, []
        return replace(state, coordinator_var=msg.src), []
    if state.role is Role.CANDIDATE_COORDINATOR and TimerId.AWAIT_CROSS_CHECK in state.pending_timers:
        # a higher process is alive and takes the candidacy over; stand down
        new = replace(
            state,
            role=Role.IDLE,
            pending_timers=state.pending_timers - {TimerId.AWAIT_CROSS_CHECK},
        )
        return new, [
            CancelTimer(TimerId.AWAIT_CROSS_CHECK),
            Note(f"node {state.id} stands down: higher process {msg.src} is alive"),
        ]
    return state, [Note(f"stale ok ignored by node {state.id}")]


def _on_inform(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    if state.known_coordinator == state.id:
        # already in charge; a fresh broadcast to the asker stops it retrying
        return state, [Send(Message(MessageKind.COORDINATOR, state.id, msg.src))]
    if state.role is Role.CANDIDATE_COORDINATOR:
        return state, [Note(f"duplicate nomination of node {state.id} ignored")]
    return _become_candidate(state)


def _on_cross_check(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    actions: list[Action] = [Send(Message(MessageKind.OK, state.id, msg.src))]
    if state.role is Role.CANDIDATE_COORDINATOR:
        return state, actions + [Note(f"node {state.id} already a candidate; probe acknowledged")]
    new, more = _become_candidate(state)
    return new, actions + more


def _adopt(state: NodeState, coordinator: int) -> tuple[NodeState, list[Action]]:
    actions: list[Action] = [CancelTimer(t) for t in sorted_timers(state.pending_timers)]
    if state.election_flag:
        actions.append(SetFlag(False))
    new = replace(
        state,
        role=Role.COORDINATOR_KNOWN,
        known_coordinator=coordinator,
        coordinator_var=coordinator,
        election_flag=False,
        pending_timers=frozenset(),
    )
    return new, actions


def _on_coordinator(state: NodeState, msg: Message) -> tuple[NodeState, list[Action]]:
    if msg.src < state.id:
        if state.role in (Role.INITIATOR, Role.CANDIDATE_COORDINATOR):
            return state, [Note(f"node {state.id} already contesting claim by {msg.src}")]
        if state.election_flag:
            return state, [Note(f"node {state.id} ignores lower claim while flag is set")]
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
    if msg.kind is MessageKind.INFORM_COORDINATOR:
        return _on_inform(state, msg)
    if msg.kind is MessageKind.CROSS_CHECK:
        return _on_cross_check(state, msg)
    return _on_coordinator(state, msg)


def on_timeout(state: NodeState, timer: TimerId) -> tuple[NodeState, list[Action]]:
    if timer not in state.pending_timers:
        return state, [Note(f"stale timer {timer.value} ignored by node {state.id}")]
    base = replace(state, pending_timers=state.pending_timers - {timer})
    if timer is TimerId.AWAIT_OKS:
        if base.role is not Role.INITIATOR:
            return base, [Note(f"await-oks expiry in role {base.role.value}; ignored")]
        if base.coordinator_var == 0:
            # nobody higher answered: the detector itself wins
            return _declare(base, [])
        nominee = base.coordinator_var
        new = replace(
            base,
            role=Role.AWAITING_TAKEOVER,
            pending_timers=base.pending_timers | {TimerId.AWAIT_COORDINATOR},
        )
        return new, [
            Send(Message(MessageKind.INFORM_COORDINATOR, base.id, nominee)),
            SetTimer(TimerId.AWAIT_COORDINATOR, AWAIT_COORDINATOR_FACTOR * base.timeout),
        ]
    if timer is TimerId.AWAIT_CROSS_CHECK:
        if base.role is not Role.CANDIDATE_COORDINATOR:
            return base, [Note(f"cross-check expiry in role {base.role.value}; ignored")]
        # every higher process stayed silent: claim the win
        return _declare(base, [])
    if timer is TimerId.AWAIT_COORDINATOR:
        if base.role is not Role.AWAITING_TAKEOVER:
            return base, [Note(f"takeover expiry in role {base.role.value}; ignored")]
        # the nominee never announced itself; assume it died and run again. The
        # flag is cleared first so the rerun arms a fresh lease.
        cleared = replace(base, election_flag=False)
        note = Note(f"nominee silent; node {base.id} reruns its election")
        new, actions = start_election(cleared)
        return new, [note] + actions
    if timer is TimerId.FLAG_LEASE:
        if not base.election_flag:
            return base, [Note(f"flag lease expired with flag already clear on {base.id}")]
        role = base.role if base.role is Role.COORDINATOR_KNOWN else Role.IDLE
        new = replace(base, election_flag=False, role=role)
        return new, [
            SetFlag(False),
            Note(f"flag lease expired without a coordinator announcement on {base.id}"),
        ]
    return base, [Note(f"timer {timer.value} has no modified handler")]
