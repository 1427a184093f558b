"""Line-oriented scenario file parsing and rendering.

Format::

    nodes = 10
    algorithm = classic
    latency = 1          # optional, default 1
    timeout = 3          # optional, default 3
    seed = 0             # optional, default 0
    ex_coordinator = true  # optional, default true
    detect 4 at 0
    crash 7 at 10
    recover 7 at 40

``#`` starts a comment; blank lines are skipped; unknown keys are rejected.
"""

from __future__ import annotations

from .engine.scenario import FaultEvent, FaultKind, Scenario
from .protocols.types import Algorithm


class ScenarioParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        prefix = f"line {line_no}: " if line_no else ""
        super().__init__(prefix + message)
        self.line_no = line_no


_KEYS = {"nodes", "algorithm", "latency", "timeout", "seed", "ex_coordinator"}
_EVENT_KINDS = {
    "crash": FaultKind.CRASH,
    "recover": FaultKind.RECOVER,
    "detect": FaultKind.DETECT,
}


def _parse_int(line_no: int, label: str, token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ScenarioParseError(line_no, f"{label} must be an integer, got {token!r}") from None


def parse_scenario(text: str) -> Scenario:
    """Parse the line-oriented format into a validated Scenario."""
    values: dict[str, str] = {}
    key_lines: dict[str, int] = {}
    events: list[FaultEvent] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in _KEYS:
                raise ScenarioParseError(line_no, f"unknown key {key!r}")
            if key in values:
                raise ScenarioParseError(line_no, f"duplicate key {key!r}")
            if not value:
                raise ScenarioParseError(line_no, f"missing value for {key!r}")
            values[key] = value
            key_lines[key] = line_no
            continue
        parts = line.split()
        if len(parts) == 4 and parts[0] in _EVENT_KINDS and parts[2] == "at":
            node = _parse_int(line_no, "node id", parts[1])
            time = _parse_int(line_no, "time", parts[3])
            events.append(FaultEvent(time=time, kind=_EVENT_KINDS[parts[0]], node=node))
            continue
        raise ScenarioParseError(line_no, f"unrecognized line {line.strip()!r}")

    if "nodes" not in values:
        raise ScenarioParseError(0, "missing required key 'nodes'")
    if "algorithm" not in values:
        raise ScenarioParseError(0, "missing required key 'algorithm'")
    algo_text = values["algorithm"]
    try:
        algorithm = Algorithm(algo_text)
    except ValueError:
        raise ScenarioParseError(
            key_lines["algorithm"],
            f"algorithm must be classic or modified, got {algo_text!r}",
        ) from None
    ex_text = values.get("ex_coordinator", "true")
    if ex_text not in ("true", "false"):
        raise ScenarioParseError(
            key_lines["ex_coordinator"],
            f"ex_coordinator must be true or false, got {ex_text!r}",
        )

    def _int_value(key: str, default: str) -> int:
        return _parse_int(key_lines.get(key, 0), key, values.get(key, default))

    scenario = Scenario(
        node_count=_parse_int(key_lines["nodes"], "nodes", values["nodes"]),
        algorithm=algorithm,
        extra_crashed_coordinator=ex_text == "true",
        latency=_int_value("latency", "1"),
        timeout=_int_value("timeout", "3"),
        schedule=tuple(events),
        seed=_int_value("seed", "0"),
    )
    scenario.validate()  # raises ScenarioError on range problems
    return scenario


def render_scenario(scenario: Scenario) -> str:
    """Canonical text for a scenario; parse(render(s)) == s."""
    lines = [
        f"nodes = {scenario.node_count}",
        f"algorithm = {scenario.algorithm.value}",
        f"latency = {scenario.latency}",
        f"timeout = {scenario.timeout}",
        f"seed = {scenario.seed}",
        f"ex_coordinator = {'true' if scenario.extra_crashed_coordinator else 'false'}",
    ]
    for ev in scenario.schedule:
        lines.append(f"{ev.kind.value.lower()} {ev.node} at {ev.time}")
    return "\n".join(lines) + "\n"
