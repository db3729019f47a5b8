"""Model-free price bounds from trajectory graphs."""

import json

from ._core import (
    DegenerateError,
    Graph,
    PricingResult,
    ValidationError,
    build,
    classify,
    one_step_super,
    one_step_under,
    pnl,
    price,
)
from ._core import config_schema_json as _config_schema_json
from ._core import resolved_config_json as _resolved_config_json

__all__ = [
    "DegenerateError",
    "Graph",
    "PricingResult",
    "ValidationError",
    "build",
    "classify",
    "config_schema",
    "load_config",
    "one_step_super",
    "one_step_under",
    "pnl",
    "price",
]


def config_schema():
    """Key schema with types, defaults and descriptions."""
    return json.loads(_config_schema_json())


def load_config(path):
    """Validated config with every default filled in, and its hash."""
    doc, digest = _resolved_config_json(str(path))
    return json.loads(doc), digest
