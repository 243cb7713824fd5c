"""Belief filtering, trap analysis and trajectory truncation on enumerable tasks.

The heavy lifting lives in the compiled ``beliefsim._core`` extension; this
package re-exports its surface and adds small dict/JSON conveniences.
"""

import json as _json

from beliefsim._core import *  # noqa: F401,F403
from beliefsim._core import run_experiment as _run_experiment, SimTask as _SimTask


def run(config):
    """Run an experiment from a config dict (or JSON text); returns the summary."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _run_experiment(config)


def task(instance, eta=0.0):
    """Build a SimTask from an instance dict (or JSON text)."""
    if not isinstance(instance, str):
        instance = _json.dumps(instance)
    return _SimTask(instance, eta)
