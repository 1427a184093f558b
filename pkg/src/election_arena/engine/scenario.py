"""Scenario description and validation for simulation runs."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..protocols.types import Algorithm


class ScenarioError(ValueError):
    """A scenario field is out of its allowed range."""


class FaultKind(enum.Enum):
    CRASH = "CRASH"
    RECOVER = "RECOVER"
    DETECT = "DETECT"


@dataclass(frozen=True)
class FaultEvent:
    time: int
    kind: FaultKind
    node: int


@dataclass(frozen=True)
class Scenario:
    """One reproducible run: a cluster, an algorithm, and a fault schedule.

    ``node_count`` counts live participants 1..N. With
    ``extra_crashed_coordinator`` the topology also holds node N+1, the old
    coordinator, already down when the run starts; everyone still addresses it
    because nobody can know it crashed.
    """

    node_count: int
    algorithm: Algorithm
    extra_crashed_coordinator: bool = True
    latency: int = 1
    timeout: int = 3
    schedule: tuple[FaultEvent, ...] = ()
    seed: int = 0  # reserved for future jitter; current runs are latency-uniform

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.schedule, key=lambda ev: ev.time))
        object.__setattr__(self, "schedule", ordered)

    @property
    def ex_coordinator_id(self) -> int | None:
        return self.node_count + 1 if self.extra_crashed_coordinator else None

    def all_ids(self) -> tuple[int, ...]:
        ids = list(range(1, self.node_count + 1))
        if self.extra_crashed_coordinator:
            ids.append(self.node_count + 1)
        return tuple(ids)

    def validate(self) -> None:
        if self.node_count < 1:
            raise ScenarioError(f"node_count: must be at least 1, got {self.node_count}")
        if self.latency < 1:
            raise ScenarioError(f"latency: must be at least 1, got {self.latency}")
        if self.timeout <= 2 * self.latency:
            raise ScenarioError(
                f"timeout: must exceed twice the latency "
                f"(got timeout={self.timeout}, latency={self.latency})"
            )
        valid = set(self.all_ids())
        for ev in self.schedule:
            if ev.time < 0:
                raise ScenarioError(f"schedule: negative time {ev.time}")
            if ev.node not in valid:
                raise ScenarioError(
                    f"schedule: {ev.kind.value.lower()} targets unknown node {ev.node}"
                )

    def default_max_ticks(self) -> int:
        return 50 * self.timeout * self.node_count
