"""Slow entropy of commuting toral automorphisms."""

import json

from ._core import (
    SlowEntropyError,
    __version__,
    chamber_count,
    run,
    slow_entropy,
    spectrum,
)
from ._core import build_report as _build_report


def build_report(subcommand, config):
    """Run one subcommand on a config (dict or JSON text) and return the report dict."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_build_report(subcommand, text))


__all__ = [
    "SlowEntropyError",
    "__version__",
    "build_report",
    "chamber_count",
    "run",
    "slow_entropy",
    "spectrum",
]
