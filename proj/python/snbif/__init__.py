"""Attractors, minimal sets and bifurcations of scalar nonautonomous ODEs."""

import json
import os
from pathlib import Path

from . import _core
from ._core import (
    DomainError,
    Error,
    IntegrationFailure,
    ModelError,
    NonConvergence,
    ParseError,
    TrackingLost,
)

__all__ = [
    "Error", "ParseError", "DomainError", "ModelError", "NonConvergence", "TrackingLost",
    "IntegrationFailure", "load", "validate", "census", "sweep", "spectrum", "classify_sdc",
    "schwarzian", "run_cli",
]


def _text(scenario):
    """Accept a dict, a JSON string or a path to a JSON file."""
    if isinstance(scenario, dict):
        return json.dumps(scenario)
    if isinstance(scenario, os.PathLike) or (isinstance(scenario, str) and not scenario.lstrip().startswith("{")):
        return Path(scenario).read_text()
    return scenario


def load(scenario):
    """Parsed scenario with defaults filled in, as a dict."""
    return json.loads(_core.normalize(_text(scenario)))


def validate(scenario):
    return json.loads(_core.validate(_text(scenario)))


def census(scenario, lam):
    return json.loads(_core.census(_text(scenario), lam))


def sweep(scenario, threads=0):
    """Returns (summary dict, csv text)."""
    summary, csv = _core.sweep(_text(scenario), threads)
    return json.loads(summary), csv


def spectrum(scenario, observable="a2", horizons=()):
    return json.loads(_core.spectrum(_text(scenario), observable, list(horizons)))


def classify_sdc(scenario, interval, eps):
    lo, hi = interval
    return json.loads(_core.classify_sdc(_text(scenario), lo, hi, list(eps)))


def schwarzian(scenario, lam, x0, t, theta=()):
    return _core.schwarzian(_text(scenario), lam, x0, t, list(theta))


def run_cli(*args):
    """Runs the command line in-process; returns (exit code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
