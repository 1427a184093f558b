"""Scenario file grammar: parsing, defaults, errors, and round-tripping."""

import pytest

from election_arena.engine.scenario import FaultEvent, FaultKind, Scenario, ScenarioError
from election_arena.protocols.types import Algorithm
from election_arena.scenario_io import ScenarioParseError, parse_scenario, render_scenario


MINIMAL = "nodes = 5\nalgorithm = classic\n"

FULL = """\
# ten node cluster, one failure mid-run
nodes = 10
algorithm = modified
latency = 2
timeout = 5
seed = 42
ex_coordinator = false

detect 4 at 0   # node 4 notices first
crash 7 at 10
recover 7 at 40
"""


class TestParsing:
    def test_minimal_uses_defaults(self):
        sc = parse_scenario(MINIMAL)
        assert sc == Scenario(node_count=5, algorithm=Algorithm.CLASSIC)
        assert (sc.latency, sc.timeout, sc.seed) == (1, 3, 0)
        assert sc.extra_crashed_coordinator

    def test_full_file(self):
        sc = parse_scenario(FULL)
        assert sc.node_count == 10
        assert sc.algorithm is Algorithm.MODIFIED
        assert (sc.latency, sc.timeout, sc.seed) == (2, 5, 42)
        assert not sc.extra_crashed_coordinator
        assert sc.schedule == (
            FaultEvent(time=0, kind=FaultKind.DETECT, node=4),
            FaultEvent(time=10, kind=FaultKind.CRASH, node=7),
            FaultEvent(time=40, kind=FaultKind.RECOVER, node=7),
        )

    def test_comments_and_blank_lines_are_skipped(self):
        text = "# header\n\nnodes = 3 # trailing\n   \nalgorithm = classic\n"
        assert parse_scenario(text).node_count == 3

    def test_whitespace_around_equals_is_free(self):
        assert parse_scenario("nodes=4\nalgorithm =classic").node_count == 4

    def test_events_keep_schedule_order_after_time_sort(self):
        text = "nodes = 4\nalgorithm = classic\ndetect 2 at 9\ncrash 1 at 3\n"
        sc = parse_scenario(text)
        assert [ev.time for ev in sc.schedule] == [3, 9]


class TestParseErrors:
    @pytest.mark.parametrize("text,line_no,fragment", [
        ("nodes = 5\nwibble = 3\nalgorithm = classic", 2, "unknown key"),
        ("nodes = 5\nnodes = 6\nalgorithm = classic", 2, "duplicate key"),
        ("nodes =\nalgorithm = classic", 1, "missing value"),
        ("nodes = five\nalgorithm = classic", 1, "integer"),
        ("nodes = 5\nalgorithm = classic\nexplode 3 at 1", 3, "unrecognized line"),
        ("nodes = 5\nalgorithm = classic\ncrash x at 1", 3, "integer"),
        ("nodes = 5\nalgorithm = classic\ncrash 1 at soon", 3, "integer"),
        ("nodes = 5\nalgorithm = quorum", 2, "classic or modified"),
        ("nodes = 5\nalgorithm = classic\nex_coordinator = yes", 3, "true or false"),
    ])
    def test_error_carries_its_line(self, text, line_no, fragment):
        with pytest.raises(ScenarioParseError) as err:
            parse_scenario(text)
        assert err.value.line_no == line_no
        assert fragment in str(err.value)
        assert f"line {line_no}:" in str(err.value)

    @pytest.mark.parametrize("text,fragment", [
        ("algorithm = classic", "nodes"),
        ("nodes = 5", "algorithm"),
        ("", "nodes"),
    ])
    def test_missing_required_keys(self, text, fragment):
        with pytest.raises(ScenarioParseError, match=fragment):
            parse_scenario(text)

    @pytest.mark.parametrize("text,fragment", [
        ("nodes = 0\nalgorithm = classic", "node_count"),
        ("nodes = 5\nalgorithm = classic\nlatency = 0", "latency"),
        ("nodes = 5\nalgorithm = classic\ntimeout = 2", "timeout"),
        ("nodes = 5\nalgorithm = classic\ncrash 9 at 0", "node"),
        ("nodes = 5\nalgorithm = classic\ncrash 1 at -2", "time"),
    ])
    def test_range_problems_surface_from_validation(self, text, fragment):
        with pytest.raises(ScenarioError, match=fragment):
            parse_scenario(text)


class TestRendering:
    @pytest.mark.parametrize("text", [MINIMAL, FULL])
    def test_round_trip(self, text):
        sc = parse_scenario(text)
        assert parse_scenario(render_scenario(sc)) == sc

    def test_canonical_output_shape(self):
        sc = parse_scenario(FULL)
        rendered = render_scenario(sc)
        assert rendered.endswith("\n")
        lines = rendered.splitlines()
        assert lines[0] == "nodes = 10"
        assert lines[1] == "algorithm = modified"
        assert "detect 4 at 0" in lines
        assert "crash 7 at 10" in lines

    def test_render_spells_out_every_default(self):
        rendered = render_scenario(parse_scenario(MINIMAL))
        assert "latency = 1" in rendered
        assert "timeout = 3" in rendered
        assert "seed = 0" in rendered
        assert "ex_coordinator = true" in rendered
