"""Python access to the GraphicTown engine, validator and metrics."""

import json
from os import fspath

from . import _core
from ._core import PromptError, design_pass_aggregate, expert_use_efficiency, render_prompt, template_match_score

__all__ = [
    "PromptError",
    "catalog",
    "design_pass_aggregate",
    "execute",
    "expert_use_efficiency",
    "render_prompt",
    "run_cli",
    "template_match_score",
    "validate",
]


def _text(value):
    return value if isinstance(value, str) else json.dumps(value)


def catalog():
    """The 46-action registry as a dict."""
    return json.loads(_core.catalog_json())


def validate(plan, instance, assets=""):
    """Static check of a retrieved plan. `plan` and `instance` are JSON text or objects."""
    return json.loads(_core.validate_json(_text(plan), _text(instance), fspath(assets)))


def execute(plan, instance, assets=""):
    """Runs a plan. Returns (records, final PNG bytes or None, saved file keys)."""
    records, png, files = _core.execute_json(_text(plan), _text(instance), fspath(assets))
    return json.loads(records), png, files


def run_cli(*args):
    """Runs the command-line tool in-process. Returns (exit code, stdout, stderr)."""
    return _core.run_cli([fspath(a) for a in args])
