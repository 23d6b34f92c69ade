# SPDX-License-Identifier: Apache-2.0
"""Single-snapshot RIS DOA estimation under impulsive noise."""

import json

from ._lnmusic import *  # noqa: F401,F403
from ._lnmusic import default_plan_json, run_sweep as _run_sweep

__version__ = "0.1.0"


def run_plan(plan):
    """Run an experiment plan given as a dict (or JSON text); returns summary rows."""
    text = plan if isinstance(plan, str) else json.dumps(plan)
    return _run_sweep(text)


def default_plan():
    return json.loads(default_plan_json())
