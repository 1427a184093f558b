"""Shared data types for the two election state machines.

Everything here is immutable. A transition function takes a NodeState plus an
input (detection, message, timer expiry) and returns a fresh NodeState together
with a list of actions for the engine to perform. The machines themselves never
touch a clock, a queue, or a network.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union


class ConfigurationError(ValueError):
    """Raised when a node or scenario is described inconsistently."""


class Algorithm(enum.Enum):
    CLASSIC = "classic"
    MODIFIED = "modified"


class MessageKind(enum.Enum):
    ELECTION = "ELECTION"
    OK = "OK"
    INFORM_COORDINATOR = "INFORM_COORDINATOR"
    CROSS_CHECK = "CROSS_CHECK"
    COORDINATOR = "COORDINATOR"


class Status(enum.Enum):
    UP = "up"
    CRASHED = "crashed"


class Role(enum.Enum):
    IDLE = "idle"
    INITIATOR = "initiator"
    AWAITING_TAKEOVER = "awaiting_takeover"
    CANDIDATE_COORDINATOR = "candidate_coordinator"
    COORDINATOR_KNOWN = "coordinator_known"


class TimerId(enum.Enum):
    AWAIT_OK = "AWAIT_OK"
    AWAIT_COORDINATOR = "AWAIT_COORDINATOR"
    AWAIT_OKS = "AWAIT_OKS"
    AWAIT_CROSS_CHECK = "AWAIT_CROSS_CHECK"
    FLAG_LEASE = "FLAG_LEASE"


@dataclass(frozen=True)
class Message:
    kind: MessageKind
    src: int
    dst: int


@dataclass(frozen=True)
class Send:
    message: Message


@dataclass(frozen=True)
class SetTimer:
    timer: TimerId
    duration: int


@dataclass(frozen=True)
class CancelTimer:
    timer: TimerId


@dataclass(frozen=True)
class DeclareCoordinator:
    node: int


@dataclass(frozen=True)
class SetFlag:
    value: bool


@dataclass(frozen=True)
class Note:
    text: str


Action = Union[Send, SetTimer, CancelTimer, DeclareCoordinator, SetFlag, Note]

# Engine-facing duration multipliers, in units of the node timeout. The reply
# waits use one timeout (the scenario invariant timeout > 2*latency guarantees
# replies beat them); the broadcast wait must outlast a full takeover round of
# the winner, hence two; the flag lease is the modified algorithm's fail-safe.
AWAIT_COORDINATOR_FACTOR = 2
FLAG_LEASE_FACTOR = 4


@dataclass(frozen=True)
class NodeState:
    id: int
    peers: tuple[int, ...]
    algorithm: Algorithm
    timeout: int = 3
    status: Status = Status.UP
    role: Role = Role.IDLE
    election_flag: bool = False
    coordinator_var: int = 0  # 0 means unset
    known_coordinator: int | None = None
    pending_timers: frozenset[TimerId] = frozenset()

    def higher_peers(self) -> tuple[int, ...]:
        return tuple(p for p in self.peers if p > self.id)


def init_node(
    node_id: int,
    peers: tuple[int, ...] | list[int] | set[int],
    algorithm: Algorithm,
    timeout: int = 3,
) -> NodeState:
    """Build the initial Up/Idle state for one process.

    Peers may be empty (a singleton cluster self-elects without messages), but
    the node must not list itself and ids must be positive and unique.
    """
    ordered = tuple(sorted(peers))
    if node_id < 1:
        raise ConfigurationError(f"node id must be positive, got {node_id}")
    if node_id in ordered:
        raise ConfigurationError(f"node {node_id} lists itself as a peer")
    if len(set(ordered)) != len(ordered):
        raise ConfigurationError(f"duplicate id in peers of node {node_id}")
    if any(p < 1 for p in ordered):
        raise ConfigurationError(f"peer ids must be positive, got {ordered}")
    if timeout < 1:
        raise ConfigurationError(f"timeout must be positive, got {timeout}")
    return NodeState(id=node_id, peers=ordered, algorithm=algorithm, timeout=timeout)


def sorted_timers(timers: frozenset[TimerId]) -> tuple[TimerId, ...]:
    """Deterministic ordering for cancel bursts."""
    return tuple(sorted(timers, key=lambda t: t.value))
