"""Closed-form counts, their edge cases, and the verification report."""

import pytest

from election_arena import analysis
from election_arena.analysis import (
    DETECTOR_IS_TOP_NOTE,
    FormulaInputs,
    WorstCasePair,
    classic_concurrent,
    classic_messages,
    classic_worst,
    comparison_table,
    formula_preconditions,
    modified_concurrent,
    modified_messages,
    modified_worst,
    verify,
)
from election_arena.engine.scenario import FaultEvent, FaultKind, Scenario
from election_arena.engine.sim import run_scenario
from election_arena.protocols.types import Algorithm


class TestClosedForms:
    @pytest.mark.parametrize("n,p,expected", [
        (5, 1, 24),
        (10, 1, 99),
        (15, 1, 224),
        (20, 1, 399),
        (25, 1, 624),
        (10, 4, 51),
        (7, 3, 26),
        (2, 1, 3),
        (1, 1, 0),
        (5, 5, 4),  # highest process detects: broadcast only
    ])
    def test_classic(self, n, p, expected):
        assert classic_messages(n, p) == expected

    @pytest.mark.parametrize("n,p,expected", [
        (5, 1, 13),
        (10, 1, 28),
        (15, 1, 43),
        (20, 1, 58),
        (25, 1, 73),
        (10, 4, 22),
        (7, 1, 19),
        (2, 1, 4),
    ])
    def test_modified(self, n, p, expected):
        assert modified_messages(n, p) == expected

    @pytest.mark.parametrize("n,expected", [(5, 24), (10, 99), (25, 624)])
    def test_classic_worst(self, n, expected):
        assert classic_worst(n) == expected

    def test_classic_worst_is_the_lowest_detector_case(self):
        for n in range(1, 1001):
            assert classic_worst(n) == classic_messages(n, 1)

    @pytest.mark.parametrize("n,published,derived", [(5, 14, 13), (10, 29, 28)])
    def test_modified_worst_reports_both_conventions(self, n, published, derived):
        assert modified_worst(n) == WorstCasePair(published, derived)
        assert modified_worst(n).as_published == modified_messages(n, 1) + 1

    def test_concurrent_forms(self):
        assert classic_concurrent(5) == 15
        assert classic_concurrent(10) == 55
        assert modified_concurrent(5) == 14
        assert modified_concurrent(10) == 29

    @pytest.mark.parametrize("fn", [
        classic_worst, modified_worst, classic_concurrent, modified_concurrent,
    ])
    def test_size_domain(self, fn):
        with pytest.raises(ValueError):
            fn(0)

    @pytest.mark.parametrize("n,p", [(0, 1), (5, 0), (5, 6), (3, -1)])
    def test_rank_domain(self, n, p):
        with pytest.raises(ValueError):
            classic_messages(n, p)
        with pytest.raises(ValueError):
            modified_messages(n, p)


class TestRelationships:
    def test_modified_needs_fewer_messages_away_from_the_top(self):
        """Strict dominance holds whenever at least two processes outrank the
        detector; at the very top of the priority range it genuinely flips."""
        for n in range(3, 61):
            for p in range(1, n - 1):
                assert classic_messages(n, p) > modified_messages(n, p), (n, p)

    def test_dominance_reverses_at_the_top_of_the_range(self):
        # second-highest detector: the cascade is tiny, the fixed overhead is not
        assert classic_messages(5, 4) == 6
        assert modified_messages(5, 4) == 7
        assert classic_messages(5, 4) < modified_messages(5, 4)

    def test_lowest_detector_costs_four_times_the_median_one_classic(self):
        n = 500
        ratio = classic_messages(n, 1) / classic_messages(n, n // 2)
        assert ratio == pytest.approx(4.0, rel=0.05)

    def test_classic_worst_doubles_the_concurrent_quote(self):
        n = 200
        ratio = classic_worst(n) / classic_concurrent(n)
        assert ratio == pytest.approx(2.0, rel=0.05)

    def test_growth_orders(self):
        # classic worst case grows quadratically, modified linearly
        assert classic_worst(1000) == 999_999
        assert modified_worst(1000).as_derived == 2998


class TestComparisonTable:
    def test_reference_rows(self):
        assert comparison_table([5, 10, 15, 20, 25]) == [
            (5, 24, 13),
            (10, 99, 28),
            (15, 224, 43),
            (20, 399, 58),
            (25, 624, 73),
        ]

    def test_single_row(self):
        assert comparison_table([7]) == [(7, 48, 19)]

    def test_rejects_empty_input(self):
        with pytest.raises(ValueError, match="non-empty"):
            comparison_table([])


def one_detect(n, algorithm, p=1, **kw):
    return Scenario(
        node_count=n, algorithm=algorithm,
        schedule=(FaultEvent(time=0, kind=FaultKind.DETECT, node=p),), **kw,
    )


class TestPreconditions:
    def test_single_detect_qualifies(self):
        assert formula_preconditions(one_detect(5, Algorithm.CLASSIC)) is None

    def test_rejects_zero_or_many_detects(self):
        sc = Scenario(node_count=5, algorithm=Algorithm.CLASSIC)
        assert "exactly one detect" in formula_preconditions(sc)
        sc = Scenario(node_count=5, algorithm=Algorithm.CLASSIC, schedule=(
            FaultEvent(time=0, kind=FaultKind.DETECT, node=1),
            FaultEvent(time=2, kind=FaultKind.DETECT, node=2),
        ))
        assert "exactly one detect" in formula_preconditions(sc)

    def test_rejects_other_fault_kinds(self):
        sc = Scenario(node_count=5, algorithm=Algorithm.CLASSIC, schedule=(
            FaultEvent(time=0, kind=FaultKind.DETECT, node=1),
            FaultEvent(time=3, kind=FaultKind.CRASH, node=4),
        ))
        assert "crash" in formula_preconditions(sc)

    def test_rejects_disabled_standby_slot(self):
        sc = one_detect(5, Algorithm.CLASSIC, extra_crashed_coordinator=False)
        assert "ex_coordinator" in formula_preconditions(sc)

    def test_rejects_detect_aimed_at_the_standby_slot(self):
        sc = one_detect(5, Algorithm.CLASSIC, p=6)
        assert "ex-coordinator" in formula_preconditions(sc)


class TestVerify:
    def test_match(self):
        sc = one_detect(10, Algorithm.MODIFIED, p=4)
        report = verify(run_scenario(sc), FormulaInputs(10, 4), Algorithm.MODIFIED)
        assert report.match
        assert report.simulated == report.analytic == 22
        assert report.crosscheck == 1
        assert report.notes == ()

    def test_detector_at_the_top_is_a_documented_mismatch(self):
        sc = one_detect(5, Algorithm.MODIFIED, p=5)
        report = verify(run_scenario(sc), FormulaInputs(5, 5), Algorithm.MODIFIED)
        assert not report.match
        assert (report.simulated, report.analytic) == (4, 5)
        assert DETECTOR_IS_TOP_NOTE in report.notes

    def test_non_quiescent_run_cannot_match(self):
        sc = one_detect(5, Algorithm.CLASSIC)
        report = verify(run_scenario(sc, max_ticks=0), FormulaInputs(5, 1), Algorithm.CLASSIC)
        assert not report.match
        assert any("quiescence" in note for note in report.notes)

    def test_notes_mention_both_counting_conventions(self):
        assert "3N-1" in analysis.WORST_CASE_NOTE
        assert "3N-2" in analysis.WORST_CASE_NOTE
        assert "n(n+1)/2" in analysis.CONCURRENT_FORMULA_NOTE
