"""Shared helpers for the line-oriented file formats (registry, graph, config, DSL)."""

from __future__ import annotations

import shlex
from collections.abc import Iterator

from .errors import ParseError


def iter_statements(text: str) -> Iterator[tuple[int, str, list[str]]]:
    """Yield ``(lineno, raw_line, tokens)`` for every non-blank, non-comment line."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            tokens = shlex.split(raw, comments=True, posix=True)
        except ValueError as exc:
            raise ParseError(str(exc), lineno, 1) from None
        if tokens:
            yield lineno, raw, tokens


def column_of(raw: str, token: str, default: int = 1) -> int:
    idx = raw.find(token)
    return idx + 1 if idx >= 0 else default


def parse_unit_float(text: str, what: str, lineno: int, raw: str) -> float:
    """Parse a float constrained to [0, 1]."""
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{what}: expected a number, got {text!r}", lineno, column_of(raw, text)) from None
    if not 0.0 <= value <= 1.0:
        raise ParseError(f"{what}: {value} outside [0, 1]", lineno, column_of(raw, text))
    return value


def quote(text: str) -> str:
    """Double-quote ``text`` so that ``shlex.split`` returns it unchanged."""
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def fmt_float(x: float) -> str:
    return repr(float(x))
