"""Line-oriented reader shared by the MDP and game formats."""

from __future__ import annotations

from typing import Iterator


class FormatError(ValueError):
    """Malformed or invalid model text; ``lineno`` is 0 when not line-specific."""

    def __init__(self, message: str, lineno: int = 0):
        super().__init__(f"line {lineno}: {message}" if lineno else message)
        self.lineno = lineno


def lines_of(text: str) -> Iterator[tuple[int, str]]:
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield i, line


def int_of(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"expected an integer, got {tok!r}", lineno) from None


def vertex_of(tok: str, n: int | None, lineno: int) -> int:
    if n is None:
        raise FormatError("'states:' must come first", lineno)
    v = int_of(tok, lineno)
    if not 0 <= v < n:
        raise FormatError(f"dangling vertex id {v}", lineno)
    return v


def id_list(rest: str, n: int | None, lineno: int, seen: set[int]) -> list[int]:
    out = []
    for tok in rest.split():
        v = vertex_of(tok, n, lineno)
        if v in seen:
            raise FormatError(f"duplicate vertex id {v}", lineno)
        seen.add(v)
        out.append(v)
    return out
