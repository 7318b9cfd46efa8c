"""Enumeration ceilings shared by the exhaustive checks."""

from __future__ import annotations

import os

DEFAULT_MAX_CARRIER = 12
DEFAULT_SEED = 20240611


class BoundExceeded(RuntimeError):
    """An exhaustive search was asked to run above the configured ceiling."""


_override: int | None = None


def set_max_carrier(limit: int | None) -> None:
    """Process-wide ceiling set from a config file; ``None`` restores the default lookup."""
    global _override
    _override = limit


def max_carrier() -> int:
    """Largest carrier an exhaustive search accepts.

    ``LASSOKIT_MAX_CARRIER`` wins over a config-file value, which wins over the default.
    """
    raw = os.environ.get("LASSOKIT_MAX_CARRIER")
    if raw is not None:
        return int(raw)
    return _override if _override is not None else DEFAULT_MAX_CARRIER


def require_within(sizes, what: str = "carrier") -> None:
    limit = max_carrier()
    for size in sizes:
        if size > limit:
            raise BoundExceeded(f"{what} of size {size} exceeds ceiling {limit}")
