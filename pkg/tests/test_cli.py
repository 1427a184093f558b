"""Command line behavior: output shapes, files written, exit codes."""

import subprocess

import pytest

from election_arena.cli import main


WALKTHROUGH = "nodes = 6\nalgorithm = classic\ndetect 3 at 0\n"


@pytest.fixture()
def scenario_file(tmp_path):
    path = tmp_path / "walkthrough.txt"
    path.write_text(WALKTHROUGH)
    return str(path)


class TestRun:
    def test_summary_line_and_exit_zero(self, scenario_file, capsys):
        code = main(["run", scenario_file])
        out = capsys.readouterr().out.splitlines()
        assert code == 0
        assert out[0] == "coordinator=6 messages=17 crosscheck=0 depth=2 quiescence=5"
        assert out[1].startswith("ok:")

    def test_trace_file_is_deterministic(self, scenario_file, tmp_path, capsys):
        a, b = tmp_path / "a.trace", tmp_path / "b.trace"
        assert main(["run", scenario_file, "--trace", str(a)]) == 0
        assert main(["run", scenario_file, "--trace", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
        first = a.read_text().splitlines()[0]
        assert first == "t=0 seq=0 FAULT DETECT 3"

    def test_everyone_dead_exits_two(self, tmp_path, capsys):
        path = tmp_path / "dead.txt"
        path.write_text("nodes = 2\nalgorithm = classic\ncrash 1 at 0\ncrash 2 at 0\n")
        code = main(["run", str(path)])
        out = capsys.readouterr().out
        assert code == 2
        assert "coordinator=none" in out
        assert "FAIL" in out

    def test_missing_file_exits_one(self, tmp_path, capsys):
        code = main(["run", str(tmp_path / "nope.txt")])
        err = capsys.readouterr().err
        assert code == 1
        assert "cannot read" in err

    def test_parse_error_exits_one_with_the_line(self, tmp_path, capsys):
        path = tmp_path / "bad.txt"
        path.write_text("nodes = 5\nalgorithm = quorum\n")
        code = main(["run", str(path)])
        err = capsys.readouterr().err
        assert code == 1
        assert "line 2" in err

    def test_unreachable_server_exits_one(self, scenario_file, capsys):
        code = main(["run", scenario_file, "--server", "http://127.0.0.1:9"])
        err = capsys.readouterr().err
        assert code == 1
        assert "request failed" in err


class TestTable:
    def test_reference_table_and_csv(self, tmp_path, capsys):
        csv_path = tmp_path / "out.csv"
        code = main(["table", "--sizes", "5,10", "--csv", str(csv_path)])
        out = capsys.readouterr().out
        assert code == 0
        assert csv_path.read_text() == (
            "N,P,algorithm,simulated,analytic,crosscheck,match,critical_path_depth\n"
            "5,1,classic,24,24,0,true,2\n"
            "5,1,modified,13,13,1,true,2\n"
            "10,1,classic,99,99,0,true,2\n"
            "10,1,modified,28,28,1,true,2\n"
        )
        assert "worst case messages:" in out
        assert "concurrent initiators:" in out
        assert out.count("note:") == 2

    def test_stdout_rows_align(self, capsys):
        assert main(["table", "--sizes", "5"]) == 0
        lines = capsys.readouterr().out.splitlines()
        header = lines[0].split()
        assert header == ["N", "P", "algorithm", "simulated", "analytic",
                          "crosscheck", "match", "depth"]
        assert lines[1].split() == ["5", "1", "classic", "24", "24", "0", "true", "2"]
        assert lines[2].split() == ["5", "1", "modified", "13", "13", "1", "true", "2"]

    def test_singleton_cluster_is_an_honest_mismatch(self, capsys):
        # one live process never sends its single expected message, so the
        # modified formula overshoots and the command reports the difference
        code = main(["table", "--sizes", "1"])
        out = capsys.readouterr().out
        assert code == 2
        assert "false" in out

    @pytest.mark.parametrize("sizes", ["", ",,", "abc", "5,x", "0", "-3"])
    def test_unusable_sizes_exit_one(self, sizes, capsys):
        code = main(["table", "--sizes", sizes])
        capsys.readouterr()
        assert code == 1


class TestVerify:
    def test_match_exits_zero(self, tmp_path, capsys):
        path = tmp_path / "ok.txt"
        path.write_text("nodes = 10\nalgorithm = modified\ndetect 4 at 0\n")
        code = main(["verify", str(path)])
        out = capsys.readouterr().out.splitlines()
        assert code == 0
        assert out[0] == "algorithm=modified live=10 detector=4"
        assert out[1] == "simulated=22 analytic=22 crosscheck=1 match=true"

    def test_documented_mismatch_exits_two(self, tmp_path, capsys):
        path = tmp_path / "top.txt"
        path.write_text("nodes = 5\nalgorithm = modified\ndetect 5 at 0\n")
        code = main(["verify", str(path)])
        out = capsys.readouterr().out
        assert code == 2
        assert "match=false" in out
        assert "note:" in out

    def test_unmet_preconditions_exit_one(self, tmp_path, capsys):
        path = tmp_path / "crashy.txt"
        path.write_text("nodes = 5\nalgorithm = classic\ndetect 1 at 0\ncrash 2 at 3\n")
        code = main(["verify", str(path)])
        err = capsys.readouterr().err
        assert code == 1
        assert "formula preconditions unmet" in err


def test_console_script_is_installed(tmp_path):
    path = tmp_path / "walkthrough.txt"
    path.write_text(WALKTHROUGH)
    proc = subprocess.run(
        ["election-arena", "run", str(path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "coordinator=6 messages=17 crosscheck=0 depth=2 quiescence=5"
