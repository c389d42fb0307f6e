import math
import os
from pathlib import Path

import pytest

import snbif

SCENARIOS = Path(os.environ.get("SNBIF_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def cubic(c1, c2=0.0, family="additive"):
    return {
        "base": {"kind": "autonomous", "frequencies": []},
        "rhs": {"shape": "cubic", "c1": {"mean": c1}, "c2": {"mean": c2}, "c3": {"mean": -1.0}},
        "family": family,
        "sweep": {"lambda_min": -0.5, "lambda_max": 0.5, "steps": 8},
    }


def test_load_fills_defaults():
    s = snbif.load(cubic(1.0))
    assert s["numerics"]["rtol"] > 0
    assert s["family"] == "additive"


def test_validate_passes_for_coercive_cubic():
    rep = snbif.validate(cubic(1.0))
    assert rep["all_passed"]


def test_parse_error_is_raised():
    with pytest.raises(snbif.ParseError):
        snbif.load('{"base": {"kind": "Autonomous"}}')


def test_census_counts_three_roots():
    rep = snbif.census(cubic(1.0), 0.0)
    assert rep["count"] == 3
    assert rep["alpha_mean"] == pytest.approx(-1.0, abs=1e-6)
    assert rep["beta_mean"] == pytest.approx(1.0, abs=1e-6)


def test_schwarzian_is_negative_for_cubic():
    v = snbif.schwarzian(cubic(1.0), 0.0, 0.3, 0.1)
    assert v < 0 and math.isfinite(v)


def test_spectrum_of_constant_is_exact():
    s = cubic(1.0, c2=0.7)
    est = snbif.spectrum(s, "a2", [10.0, 20.0])
    assert est["low"] == 0.7 and est["high"] == 0.7


def test_sweep_on_shipped_scenario():
    summary, csv = snbif.sweep(SCENARIOS / "double_saddle.json", threads=2)
    assert summary["classification"] == "DoubleSaddleNode"
    assert csv.splitlines()[0].startswith("lambda,count")


def test_cli_usage_error():
    code, _, err = snbif.run_cli("census")
    assert code == 64 and err
