"""Deterministic simulator of a decentralized exposure-notification ecosystem.

Thin convenience layer over the C++ core: scenarios go in as dicts, JSON
strings, or files; reports come back as dicts.
"""

import json as _json

from ._core import (
    ScenarioError,
    __version__,
    attenuation_db,
    demo,
    demo_names,
    derive_day_identifiers,
    derive_epi,
)
from ._core import (
    oracle_file as _oracle_file,
)
from ._core import (
    oracle_json as _oracle_json,
)
from ._core import (
    run_scenario_file as _run_file,
)
from ._core import (
    run_scenario_json as _run_json,
)
from ._core import (
    validate_file as _validate_file,
)
from ._core import (
    validate_json as _validate_json,
)

__all__ = [
    "ScenarioError",
    "__version__",
    "attenuation_db",
    "demo",
    "demo_names",
    "derive_day_identifiers",
    "derive_epi",
    "oracle",
    "oracle_file",
    "run",
    "run_file",
    "validate",
    "validate_file",
]


def _as_json_text(scenario):
    if isinstance(scenario, str):
        return scenario
    return _json.dumps(scenario)


def run(scenario, *, seed=None, verbose=False):
    """Simulate a scenario (dict or JSON string); returns the report dict."""
    return _json.loads(_run_json(_as_json_text(scenario), seed, verbose))


def run_file(path, *, seed=None, verbose=False):
    """Simulate a scenario file; returns the report dict."""
    return _json.loads(_run_file(str(path), seed, verbose))


def oracle(scenario):
    """Ground-truth expectation for a scenario (dict or JSON string)."""
    return _json.loads(_oracle_json(_as_json_text(scenario)))


def oracle_file(path):
    """Ground-truth expectation for a scenario file."""
    return _json.loads(_oracle_file(str(path)))


def validate(scenario):
    """Raises ScenarioError when the scenario (dict or JSON string) is invalid."""
    _validate_json(_as_json_text(scenario))


def validate_file(path):
    """Raises ScenarioError when the scenario file is invalid."""
    _validate_file(str(path))
