"""Deterministic virtual-time discrete-event simulator.

A single heap orders every pending delivery, timer expiry, and scheduled fault
by (time, source id, sequence number); the sequence number is unique so the
order is total and a rerun reproduces the trace byte for byte. All protocol
logic lives in the pure state machines; this module only moves messages,
expires timers, applies faults, and records what happened.
"""

from __future__ import annotations

import enum
import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .. import protocols
from ..protocols.types import (
    Action,
    CancelTimer,
    Message,
    MessageKind,
    NodeState,
    Role,
    Send,
    SetTimer,
    Status,
    TimerId,
    init_node,
)
from .scenario import FaultEvent, FaultKind, Scenario


class RecordKind(enum.Enum):
    DELIVER = "DELIVER"
    DROP = "DROP"
    FAULT = "FAULT"
    TIMER = "TIMER"
    NOTE = "NOTE"


@dataclass(frozen=True)
class TraceRecord:
    """One processed event. NOTE records are engine commentary and are kept in
    memory only; the other four kinds render to the stable textual format."""

    time: int
    seq: int
    kind: RecordKind
    node: int | None = None
    src: int | None = None
    dst: int | None = None
    message_kind: MessageKind | None = None
    fault: FaultKind | None = None
    timer: TimerId | None = None
    text: str = ""
    depth: int = 0
    trigger_seq: int | None = None
    actions: tuple[Action, ...] = ()
    role_after: Role | None = None

    def render(self) -> str | None:
        if self.kind is RecordKind.DELIVER:
            return f"t={self.time} seq={self.seq} {self.src}->{self.dst} {self.message_kind.value}"
        if self.kind is RecordKind.DROP:
            return f"t={self.time} seq={self.seq} DROP {self.src}->{self.dst} {self.message_kind.value}"
        if self.kind is RecordKind.FAULT:
            return f"t={self.time} seq={self.seq} FAULT {self.fault.value} {self.node}"
        if self.kind is RecordKind.TIMER:
            return f"t={self.time} seq={self.seq} TIMER {self.node} {self.timer.value}"
        return None


@dataclass(frozen=True)
class MessageStats:
    """Per-kind send counts for one run.

    Every send appears in the trace as a delivery or a drop, so the counts
    cover dropped messages too. The headline total covers the four protocol
    kinds addressed to live-participant slots; cross-check probes are tallied
    apart, and other sends addressed to the standby ex-coordinator slot are
    reported separately rather than folded into the headline.
    """

    election: int = 0
    ok: int = 0
    inform: int = 0
    crosscheck: int = 0
    coordinator: int = 0
    to_ex_coordinator: int = 0
    critical_path_depth: int | None = 0

    @property
    def headline_total(self) -> int:
        return self.election + self.ok + self.inform + self.coordinator

    @property
    def total_with_crosscheck(self) -> int:
        return self.headline_total + self.crosscheck


@dataclass(frozen=True)
class Verdict:
    passed: bool
    coordinator: int | None
    reason: str


@dataclass(frozen=True)
class SimResult:
    scenario: Scenario
    final_states: dict[int, NodeState]
    trace: tuple[TraceRecord, ...]
    stats: MessageStats
    quiescent: bool
    quiescence_time: int
    agreed_coordinator: int | None


def message_stats(
    trace: tuple[TraceRecord, ...],
    ex_coordinator_id: int | None,
    critical_path_depth: int | None,
) -> MessageStats:
    election = ok = inform = crosscheck = coordinator = to_ex = 0
    for rec in trace:
        if rec.kind not in (RecordKind.DELIVER, RecordKind.DROP):
            continue
        kind = rec.message_kind
        if kind is MessageKind.CROSS_CHECK:
            crosscheck += 1
        elif rec.dst == ex_coordinator_id:
            to_ex += 1
        elif kind is MessageKind.ELECTION:
            election += 1
        elif kind is MessageKind.OK:
            ok += 1
        elif kind is MessageKind.INFORM_COORDINATOR:
            inform += 1
        else:
            coordinator += 1
    return MessageStats(
        election=election,
        ok=ok,
        inform=inform,
        crosscheck=crosscheck,
        coordinator=coordinator,
        to_ex_coordinator=to_ex,
        critical_path_depth=critical_path_depth,
    )


def check_agreement(result: SimResult) -> Verdict:
    """Pass iff every Up node knows the highest Up id as coordinator."""
    if not result.quiescent:
        return Verdict(False, None, "non-quiescent run")
    up = [s for s in result.final_states.values() if s.status is Status.UP]
    if not up:
        return Verdict(False, None, "no live nodes")
    top = max(s.id for s in up)
    knowns = sorted({s.known_coordinator for s in up}, key=lambda v: (v is None, v))
    if knowns == [top]:
        return Verdict(True, top, "all live nodes agree")
    return Verdict(
        False,
        result.agreed_coordinator,
        f"expected coordinator {top}, live nodes report {knowns}",
    )


@dataclass(frozen=True)
class _Delivery:
    message: Message


@dataclass(frozen=True)
class _TimerFire:
    node: int
    timer: TimerId
    generation: int


@dataclass(frozen=True)
class _Fault:
    event: FaultEvent


class Sim:
    """One scenario instance stepped to quiescence."""

    def __init__(self, scenario: Scenario):
        scenario.validate()
        self.scenario = scenario
        self.nodes: dict[int, NodeState] = {}
        all_ids = scenario.all_ids()
        for node_id in all_ids:
            peers = tuple(p for p in all_ids if p != node_id)
            state = init_node(node_id, peers, scenario.algorithm, scenario.timeout)
            if node_id == scenario.ex_coordinator_id:
                state = replace(state, status=Status.CRASHED)
            self.nodes[node_id] = state

        self._heap: list[tuple[int, int, int, object]] = []
        self._seq = 0
        self._live = 0
        self._armed: dict[tuple[int, TimerId], int] = {}
        self._timer_generation = 0
        self.trace: list[TraceRecord] = []
        self.now = 0
        self._last_event_time = 0
        self._last_coordinator_depth: int | None = None
        for ev in scenario.schedule:
            self._push(ev.time, ev.node, _Fault(ev), depth=0, trigger=None)

    # -- queue plumbing -----------------------------------------------------

    def _push(self, time: int, src: int, payload: object, depth: int, trigger: int | None) -> int:
        seq = self._seq
        self._seq += 1
        heapq.heappush(self._heap, (time, src, seq, (payload, depth, trigger)))
        self._live += 1
        return seq

    def _pop_live(self) -> tuple[int, int, int, object, int, int | None] | None:
        """Pop the next event that is still meaningful, discarding superseded
        timer entries without treating them as processed events."""
        while self._heap:
            time, src, seq, (payload, depth, trigger) = heapq.heappop(self._heap)
            if isinstance(payload, _TimerFire):
                if self._armed.get((payload.node, payload.timer)) != payload.generation:
                    self._live -= 1
                    continue
            return time, src, seq, payload, depth, trigger
        return None

    def peek_time(self) -> int | None:
        while self._heap:
            time, src, seq, (payload, depth, trigger) = self._heap[0]
            if isinstance(payload, _TimerFire):
                if self._armed.get((payload.node, payload.timer)) != payload.generation:
                    heapq.heappop(self._heap)
                    self._live -= 1
                    continue
            return time
        return None

    @property
    def pending_events(self) -> int:
        return self._live

    # -- actions ------------------------------------------------------------

    def _disarm(self, node: int, timer: TimerId) -> None:
        if self._armed.pop((node, timer), None) is not None:
            self._live -= 1

    def _apply_actions(self, node: int, actions: list[Action], depth: int, trigger: int) -> None:
        for action in actions:
            if isinstance(action, Send):
                msg = action.message
                self._push(
                    self.now + self.scenario.latency,
                    msg.src,
                    _Delivery(msg),
                    depth=depth + 1,
                    trigger=trigger,
                )
            elif isinstance(action, SetTimer):
                self._disarm(node, action.timer)
                self._timer_generation += 1
                gen = self._timer_generation
                self._armed[(node, action.timer)] = gen
                self._push(
                    self.now + action.duration,
                    node,
                    _TimerFire(node, action.timer, gen),
                    depth=depth,
                    trigger=trigger,
                )
            elif isinstance(action, CancelTimer):
                self._disarm(node, action.timer)
            # DeclareCoordinator, SetFlag and Note carry no engine effect; they
            # stay visible through the record's action tuple

    # -- event dispatch -----------------------------------------------------

    def _crash(self, node_id: int) -> NodeState:
        for key in [k for k in self._armed if k[0] == node_id]:
            self._disarm(*key)
        state = replace(self.nodes[node_id], status=Status.CRASHED, pending_timers=frozenset())
        self.nodes[node_id] = state
        return state

    def _record(self, record: TraceRecord) -> TraceRecord:
        self.trace.append(record)
        if record.kind is not RecordKind.NOTE:
            self._last_event_time = record.time
        if (
            record.kind in (RecordKind.DELIVER, RecordKind.DROP)
            and record.message_kind is MessageKind.COORDINATOR
        ):
            self._last_coordinator_depth = record.depth
        return record

    def step(self) -> TraceRecord | None:
        """Process one event; None means the queue is empty (quiescence)."""
        popped = self._pop_live()
        if popped is None:
            return None
        time, src, seq, payload, depth, trigger = popped
        self._live -= 1
        self.now = time

        if isinstance(payload, _Fault):
            return self._dispatch_fault(payload.event, seq, depth, trigger)
        if isinstance(payload, _Delivery):
            return self._dispatch_delivery(payload.message, seq, depth, trigger)
        return self._dispatch_timer(payload, seq, depth, trigger)

    def _dispatch_fault(self, ev: FaultEvent, seq: int, depth: int, trigger: int | None) -> TraceRecord:
        state = self.nodes[ev.node]
        if ev.kind is FaultKind.CRASH:
            if state.status is Status.CRASHED:
                return self._record(TraceRecord(
                    time=self.now, seq=seq, kind=RecordKind.NOTE, node=ev.node,
                    text=f"crash ignored: node {ev.node} already down",
                    depth=depth, trigger_seq=trigger,
                ))
            new = self._crash(ev.node)
            return self._record(TraceRecord(
                time=self.now, seq=seq, kind=RecordKind.FAULT, node=ev.node,
                fault=ev.kind, depth=depth, trigger_seq=trigger,
                role_after=new.role,
            ))
        if ev.kind is FaultKind.RECOVER:
            if state.status is Status.UP:
                return self._record(TraceRecord(
                    time=self.now, seq=seq, kind=RecordKind.NOTE, node=ev.node,
                    text=f"recover ignored: node {ev.node} already up",
                    depth=depth, trigger_seq=trigger,
                ))
            new, actions = protocols.on_recovery(state, self.now)
            self.nodes[ev.node] = new
            self._apply_actions(ev.node, actions, depth, seq)
            return self._record(TraceRecord(
                time=self.now, seq=seq, kind=RecordKind.FAULT, node=ev.node,
                fault=ev.kind, depth=depth, trigger_seq=trigger,
                actions=tuple(actions), role_after=new.role,
            ))
        # DETECT
        if state.status is Status.CRASHED:
            return self._record(TraceRecord(
                time=self.now, seq=seq, kind=RecordKind.NOTE, node=ev.node,
                text=f"detect ignored: node {ev.node} is crashed",
                depth=depth, trigger_seq=trigger,
            ))
        new, actions = protocols.on_detect(state)
        self.nodes[ev.node] = new
        self._apply_actions(ev.node, actions, depth, seq)
        return self._record(TraceRecord(
            time=self.now, seq=seq, kind=RecordKind.FAULT, node=ev.node,
            fault=ev.kind, depth=depth, trigger_seq=trigger,
            actions=tuple(actions), role_after=new.role,
        ))

    def _dispatch_delivery(self, msg: Message, seq: int, depth: int, trigger: int | None) -> TraceRecord:
        state = self.nodes[msg.dst]
        if state.status is Status.CRASHED:
            return self._record(TraceRecord(
                time=self.now, seq=seq, kind=RecordKind.DROP, node=msg.dst,
                src=msg.src, dst=msg.dst, message_kind=msg.kind,
                depth=depth, trigger_seq=trigger,
            ))
        new, actions = protocols.on_message(state, msg)
        self.nodes[msg.dst] = new
        self._apply_actions(msg.dst, actions, depth, seq)
        return self._record(TraceRecord(
            time=self.now, seq=seq, kind=RecordKind.DELIVER, node=msg.dst,
            src=msg.src, dst=msg.dst, message_kind=msg.kind,
            depth=depth, trigger_seq=trigger,
            actions=tuple(actions), role_after=new.role,
        ))

    def _dispatch_timer(self, fire: _TimerFire, seq: int, depth: int, trigger: int | None) -> TraceRecord:
        del self._armed[(fire.node, fire.timer)]
        state = self.nodes[fire.node]
        new, actions = protocols.on_timeout(state, fire.timer)
        self.nodes[fire.node] = new
        self._apply_actions(fire.node, actions, depth, seq)
        return self._record(TraceRecord(
            time=self.now, seq=seq, kind=RecordKind.TIMER, node=fire.node,
            timer=fire.timer, depth=depth, trigger_seq=trigger,
            actions=tuple(actions), role_after=new.role,
        ))

    # -- driving ------------------------------------------------------------

    def run_to_quiescence(self, max_ticks: int | None = None) -> SimResult:
        limit = max_ticks if max_ticks is not None else self.scenario.default_max_ticks()
        quiescent = True
        while True:
            upcoming = self.peek_time()
            if upcoming is None:
                break
            if upcoming > limit:
                quiescent = False
                break
            self.step()
        return self._result(quiescent)

    def _result(self, quiescent: bool) -> SimResult:
        up = [s for s in self.nodes.values() if s.status is Status.UP]
        knowns = {s.known_coordinator for s in up}
        agreed = knowns.pop() if quiescent and len(knowns) == 1 and None not in knowns else None
        depth = self._critical_path_depth(quiescent)
        stats = message_stats(tuple(self.trace), self.scenario.ex_coordinator_id, depth)
        return SimResult(
            scenario=self.scenario,
            final_states=dict(self.nodes),
            trace=tuple(self.trace),
            stats=stats,
            quiescent=quiescent,
            quiescence_time=self._last_event_time,
            agreed_coordinator=agreed,
        )

    def _critical_path_depth(self, quiescent: bool) -> int | None:
        if not quiescent:
            return None
        if self._last_coordinator_depth is None:
            return 0
        return self._last_coordinator_depth


def build_sim(scenario: Scenario) -> Sim:
    return Sim(scenario)


def run_scenario(scenario: Scenario, max_ticks: int | None = None) -> SimResult:
    return Sim(scenario).run_to_quiescence(max_ticks)


def run_batch(scenarios: list[Scenario], max_workers: int | None = None) -> list[SimResult]:
    """Run independent scenarios concurrently; results keep input order."""
    if not scenarios:
        return []
    workers = max_workers or min(8, len(scenarios))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_scenario, scenarios))


def trace_lines(result: SimResult) -> list[str]:
    lines = []
    for rec in result.trace:
        rendered = rec.render()
        if rendered is not None:
            lines.append(rendered)
    return lines


def write_trace(result: SimResult, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in trace_lines(result):
            fh.write(line + "\n")
