"""Pattern model for one-variable patterns with reversals.

A pattern is ``s1 x1 s2 x2 ... s_{r-1} x_{r-1} s_r`` where every ``x_z`` is
either the variable ``x`` or its mirror image.  Text syntax uses ``{x}`` and
``{~x}``; a backslash escapes ``{`` or ``\\``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass


class Direction(enum.Enum):
    FORWARD = "x"
    REVERSED = "~x"

    def flipped(self) -> "Direction":
        return Direction.REVERSED if self is Direction.FORWARD else Direction.FORWARD


FWD = Direction.FORWARD
REV = Direction.REVERSED


class PatternSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.offset = offset


@dataclass(frozen=True)
class Pattern:
    segments: tuple[bytes, ...]
    directions: tuple[Direction, ...]

    def __post_init__(self):
        segs = tuple(bytes(s) for s in self.segments)
        dirs = tuple(self.directions)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "directions", dirs)
        if len(segs) < 1:
            raise ValueError("a pattern needs at least one segment")
        if len(dirs) != len(segs) - 1:
            raise ValueError("need exactly one direction between consecutive segments")

    @property
    def r(self) -> int:
        return len(self.segments)

    @property
    def terminal_length(self) -> int:
        return sum(len(s) for s in self.segments)

    def image_length(self, beta: int) -> int:
        return image_length(self, beta)

    def render(self) -> str:
        return render(self)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, order=True)
class Instance:
    start: int
    sub_len: int


def parse_pattern(syntax: bytes | str) -> Pattern:
    if isinstance(syntax, str):
        syntax = syntax.encode("utf-8", errors="surrogateescape")
    segments: list[bytes] = []
    directions: list[Direction] = []
    cur = bytearray()
    i, n = 0, len(syntax)
    while i < n:
        c = syntax[i]
        if c == 0x5C:  # backslash
            if i + 1 >= n:
                raise PatternSyntaxError("dangling escape", i)
            nxt = syntax[i + 1]
            if nxt not in (0x7B, 0x5C):
                raise PatternSyntaxError("unknown escape", i)
            cur.append(nxt)
            i += 2
        elif c == 0x7B:  # '{'
            if syntax.startswith(b"{x}", i):
                directions.append(FWD)
                i += 3
            elif syntax.startswith(b"{~x}", i):
                directions.append(REV)
                i += 4
            else:
                raise PatternSyntaxError("malformed variable token", i)
            segments.append(bytes(cur))
            cur = bytearray()
        else:
            cur.append(c)
            i += 1
    segments.append(bytes(cur))
    return Pattern(tuple(segments), tuple(directions))


def _escape(seg: bytes) -> str:
    out = bytearray()
    for c in seg:
        if c in (0x7B, 0x5C):
            out.append(0x5C)
        out.append(c)
    return out.decode("utf-8", errors="surrogateescape")


def render(p: Pattern) -> str:
    parts = [_escape(p.segments[0])]
    for d, seg in zip(p.directions, p.segments[1:]):
        parts.append("{x}" if d is FWD else "{~x}")
        parts.append(_escape(seg))
    return "".join(parts)


def render_bytes(p: Pattern) -> bytes:
    return render(p).encode("utf-8", errors="surrogateescape")


def normalize(p: Pattern) -> Pattern:
    """Flip every direction when the first variable is reversed."""
    if p.r >= 2 and p.directions[0] is REV:
        return Pattern(p.segments, tuple(d.flipped() for d in p.directions))
    return p


def image_length(p: Pattern, beta: int) -> int:
    if beta < 0:
        raise ValueError("substitution length must be non-negative")
    return p.terminal_length + (p.r - 1) * beta
