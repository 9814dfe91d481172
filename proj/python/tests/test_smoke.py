import os
import pathlib

import pytest

import blockgrader

SUM = """<pl-answer tag="A" depends="" indent="0">def my_sum(first, second):</pl-answer>
<pl-answer tag="B" depends="A" indent="1">sum = 0</pl-answer>
<pl-answer tag="C" depends="B" indent="1">sum += first</pl-answer>
<pl-answer tag="D" depends="B" indent="1">sum += second</pl-answer>
<pl-answer tag="E" depends="A|B" indent="1">sum = first + second</pl-answer>
<pl-answer tag="F" depends="C,D|E" indent="1" final="true">return sum</pl-answer>
"""

PROBLEMS = pathlib.Path(os.environ.get("BLOCKGRADER_PROBLEMS", pathlib.Path(__file__).parents[2] / "problems"))


@pytest.fixture
def problem():
    return blockgrader.load_problem(SUM)


def test_parse_depends():
    assert blockgrader.parse_depends("C, D | E") == [["C", "D"], ["E"]]
    assert blockgrader.parse_depends("") == []


def test_stats_and_collapse(problem):
    assert problem.stats() == {"n": 6, "m": 8, "d": 3, "bound": 4}
    dags = problem.collapse()
    assert [d["nodes"] for d in dags] == [["A", "B", "C", "D", "F"], ["A", "B", "E", "F"], ["A", "E", "F"]]
    assert problem.collapse(reverse=True) == dags
    assert len(problem.solutions()) == 4


def test_grade(problem):
    exact = problem.grade([("A", 0), ("E", 1), ("F", 1)])
    assert exact["exact"] and exact["score"] == 1.0
    six = problem.grade([{"tag": t, "indent": 0 if t == "A" else 1} for t in "ABCDEF"])
    assert six["score"] == pytest.approx(0.8)
    assert six["first_error_index"] == 4
    swapped = problem.grade([("A", 0), ("F", 1), ("E", 1)])
    assert swapped["first_error_index"] == 1
    assert problem.grade(["A", "E", "F"], lenient_indent=True)["exact"]


def test_errors(problem):
    with pytest.raises(blockgrader.BlockGraderError) as info:
        problem.grade([("Z", 0)])
    assert info.value.code == "UnknownTagError"
    with pytest.raises(blockgrader.BlockGraderError):
        blockgrader.load_problem('<pl-answer tag="A" depends="A" final="true"></pl-answer>')


def test_formats_round_trip(problem):
    canonical = problem.to_canonical()
    assert blockgrader.load_problem(canonical) == problem
    assert "A -> B" in problem.export_dot()


def test_shipped_problems():
    files = sorted(p for p in PROBLEMS.iterdir() if p.is_file())
    assert files
    for path in files:
        assert blockgrader.load_problem_file(str(path)).stats()["d"] >= 2
