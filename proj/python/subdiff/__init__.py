"""Outer limits of Frechet subdifferentials for min-max functions.

Problems are given as dicts, JSON strings or paths to JSON files; results
come back as dicts with the same layout as the command-line output.
"""

import json
import os

from . import _core
from ._core import EnumerationCapError, ParseError, UnsupportedDimensionError, UnsupportedModeError

__all__ = [
    "outer",
    "dfamily",
    "erbound",
    "oracle",
    "render_svg",
    "check",
    "ParseError",
    "UnsupportedModeError",
    "UnsupportedDimensionError",
    "EnumerationCapError",
]


def _text(problem):
    if isinstance(problem, dict):
        return json.dumps(problem)
    if isinstance(problem, os.PathLike) or (isinstance(problem, str) and not problem.lstrip().startswith("{")):
        with open(problem, encoding="utf-8") as fh:
            return fh.read()
    return problem


def outer(problem, mode="exact2d", closure=False, dirs=None, seed=None):
    return json.loads(_core.outer(_text(problem), mode, closure, dirs, seed))


def dfamily(problem):
    return json.loads(_core.dfamily(_text(problem)))


def erbound(problem, empirical=False, seed=None):
    return json.loads(_core.erbound(_text(problem), empirical, seed))


def oracle(problem, radii=None, dirs=None, seed=None):
    return json.loads(_core.oracle(_text(problem), radii, dirs, seed))


def render_svg(result):
    return _core.render_svg(json.dumps(result) if isinstance(result, dict) else result)


def check(fixtures):
    """Runs the acceptance suite; returns (passed, tap_report)."""
    return _core.check(os.fspath(fixtures))
