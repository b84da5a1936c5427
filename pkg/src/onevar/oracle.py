"""Brute-force reference matcher.

Tries every start position and every substitution length and compares the
pattern image with the text byte by byte.  Quadratic in the text length;
only meant as ground truth for tests.
"""
from __future__ import annotations

from .pattern import Direction, Instance, Pattern


def _image_matches(t: bytes, p: Pattern, start0: int, beta: int) -> bool:
    pos = start0
    segs = p.segments
    w = None
    if not t.startswith(segs[0], pos):
        return False
    pos += len(segs[0])
    for z, d in enumerate(p.directions):
        chunk = t[pos:pos + beta]
        if w is None:
            w = chunk if d is Direction.FORWARD else chunk[::-1]
        else:
            want = w if d is Direction.FORWARD else w[::-1]
            if chunk != want:
                return False
        pos += beta
        if not t.startswith(segs[z + 1], pos):
            return False
        pos += len(segs[z + 1])
    return True


def naive_find(t: bytes, p: Pattern, min_sub_len: int = 1) -> list[Instance]:
    t = bytes(t)
    n = len(t)
    fixed = p.terminal_length
    k = p.r - 1
    out: list[Instance] = []
    for i in range(n):
        if k == 0:
            if t.startswith(p.segments[0], i):
                out.append(Instance(i + 1, 0))
            continue
        beta = min_sub_len
        while fixed + k * beta <= n - i:
            if _image_matches(t, p, i, beta):
                out.append(Instance(i + 1, beta))
            beta += 1
    return out
