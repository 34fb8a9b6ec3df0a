"""Secret-shared aggregation of smart meter readings."""

import json

from ._core import (
    MODULUS,
    MetershareError,
    extrapolate_cpu,
    field_add,
    field_inv,
    field_mul,
    formula_comm,
    formula_mults,
    reconstruct,
    selftest,
    share_secret,
)
from ._core import run_scenario_json as _run_scenario_json

__all__ = [
    "MODULUS",
    "MetershareError",
    "extrapolate_cpu",
    "field_add",
    "field_inv",
    "field_mul",
    "formula_comm",
    "formula_mults",
    "reconstruct",
    "run_scenario",
    "selftest",
    "share_secret",
]


def run_scenario(scenario, threads=1):
    """Runs one time slot. `scenario` is a dict or a JSON string with the
    same keys as a scenario file."""
    text = scenario if isinstance(scenario, str) else json.dumps(scenario)
    return _run_scenario_json(text, threads)
