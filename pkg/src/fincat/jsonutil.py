"""Canonical JSON serialization.

All reports and data files go through :func:`canonical_dumps` so that
identical values always serialize to identical bytes, regardless of how
they were computed.
"""

from __future__ import annotations

import json


def canonical_dumps(data) -> str:
    """Serialize ``data`` deterministically (insertion order, 2-space indent)."""
    return json.dumps(data, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
