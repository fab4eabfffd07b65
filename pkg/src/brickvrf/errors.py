"""Shared exception base for the engine.

Every recoverable data-level failure (bad Turtle, bad query text, bad
telemetry rows, degenerate regression input) derives from BrickVrfError so
callers — the CLI in particular — can distinguish "your input is wrong"
from genuine bugs.
"""


class BrickVrfError(Exception):
    """Base class for all data-level errors raised by this package."""
