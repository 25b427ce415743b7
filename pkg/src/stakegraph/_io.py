"""Shared source handling for loaders that accept a path or raw content."""
from __future__ import annotations

import os
from pathlib import Path
from typing import Union


def read_text_source(source: Union[str, Path]) -> str:
    """Return file content when `source` names an existing file, else the
    string itself. Strings with newlines are always treated as content."""
    if isinstance(source, Path):
        return source.read_text(encoding="utf-8")
    text = str(source)
    if text and "\n" not in text and len(text) < 4096:
        try:
            if os.path.isfile(text):
                return Path(text).read_text(encoding="utf-8")
        except (OSError, ValueError):
            pass
    return text
