"""Packaged reference objects, doubling as golden test inputs.

The two splitting designs are the classical small existence witnesses for
their parameter sets: a 2-(9,9,4,1) splitting design with c=2, u=2 built from
base block {1,2},{3,5} developed mod 9, and a 3-(10,15,6,1) splitting design
with c=2, u=3.  Their derived codes are the matching 2- and 3-source
authentication codes; the Fano plane covers the degenerate c=1 case.
"""
from __future__ import annotations

from importlib.resources import files
from pathlib import Path

from .codes import AuthCode, parse_matrix
from .designs import DesignParams, SplittingDesign, parse_design


def fixture_path(name: str) -> Path:
    """Filesystem path of a packaged fixture file, e.g. 'design-2-9.design'."""
    return Path(str(files("splitauth").joinpath("data", name)))


def _design(name: str) -> tuple[SplittingDesign, DesignParams]:
    return parse_design(fixture_path(name).read_text(encoding="utf-8"))


def _code(name: str) -> AuthCode:
    return parse_matrix(fixture_path(name).read_text(encoding="utf-8"))


def design_2_9() -> tuple[SplittingDesign, DesignParams]:
    """2-(9,9,4,1) splitting design, c=2, u=2, points labelled 1..9."""
    return _design("design-2-9.design")


def design_3_10() -> tuple[SplittingDesign, DesignParams]:
    """3-(10,15,6,1) splitting design, c=2, u=3, points labelled 0..9."""
    return _design("design-3-10.design")


def fano_design() -> tuple[SplittingDesign, DesignParams]:
    """The Fano plane as a c=1, u=3 splitting design."""
    return _design("fano.design")


def code_2_9() -> AuthCode:
    """2-splitting code with 2 sources, 9 messages, 9 rules."""
    return _code("code-2-9.code")


def code_3_10() -> AuthCode:
    """2-splitting code with 3 sources, 10 messages, 15 rules."""
    return _code("code-3-10.code")
