"""Human-readable display names for IPC field codes.

The mapping is a curated package asset (``data/field_names.json``);
codes without an entry fall back to the bare code.
"""

from __future__ import annotations

import json
from importlib.resources import files

_NAMES: dict[str, str] = json.loads(
    files("techatlas").joinpath("data/field_names.json").read_text(encoding="utf-8")
)


def display_name(code: str) -> str:
    return _NAMES.get(code, code)
