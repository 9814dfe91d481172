"""Python bindings for the blockgrader core."""

from ._blockgrader import (
    BlockGraderError,
    Problem,
    load_problem,
    load_problem_file,
    parse_depends,
)

__all__ = [
    "BlockGraderError",
    "Problem",
    "load_problem",
    "load_problem_file",
    "parse_depends",
]
