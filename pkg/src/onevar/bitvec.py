"""Packed bit arrays over 64-bit words.

Bit ``i`` (0-based) lives in word ``i >> 6`` at bit ``i & 63``.  Public
helpers that talk about positions (``clear_range``, ``from_positions``) use
1-based positions so they line up with text coordinates.
"""
from __future__ import annotations

import numpy as np

WORD = 64


def _build_rev16() -> np.ndarray:
    x = np.arange(1 << 16, dtype=np.uint32)
    r = np.zeros_like(x)
    for b in range(16):
        r |= ((x >> b) & 1) << (15 - b)
    return r.astype(np.uint64)


REV16 = _build_rev16()


class BitArray:
    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        if length < 0:
            raise ValueError("negative length")
        self.length = int(length)
        nw = (self.length + WORD - 1) // WORD
        if words is None:
            words = np.zeros(nw, dtype=np.uint64)
        else:
            words = np.ascontiguousarray(words, dtype=np.uint64)
            if words.shape != (nw,):
                raise ValueError("word count does not match length")
        self.words = words
        self._mask_tail()

    def _mask_tail(self):
        rem = self.length % WORD
        if rem and len(self.words):
            self.words[-1] &= np.uint64((1 << rem) - 1)

    @classmethod
    def from_bools(cls, bools) -> "BitArray":
        b = np.asarray(bools, dtype=bool)
        n = len(b)
        packed = np.packbits(b, bitorder="little")
        pad = (-len(packed)) % 8
        if pad:
            packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
        return cls(n, packed.view("<u8").astype(np.uint64))

    @classmethod
    def from_positions(cls, length: int, positions) -> "BitArray":
        b = np.zeros(length, dtype=bool)
        idx = np.asarray(list(positions), dtype=np.int64) - 1
        if len(idx) and (idx.min() < 0 or idx.max() >= length):
            raise IndexError("position outside the array")
        b[idx] = True
        return cls.from_bools(b)

    def to_bools(self) -> np.ndarray:
        raw = self.words.astype("<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.length].astype(bool)

    def positions(self) -> list[int]:
        return (np.flatnonzero(self.to_bools()) + 1).tolist()

    def get(self, i0: int) -> bool:
        return bool((int(self.words[i0 >> 6]) >> (i0 & 63)) & 1)

    def popcount(self) -> int:
        return int(self.to_bools().sum())

    def copy(self) -> "BitArray":
        return BitArray(self.length, self.words.copy())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitArray)
            and self.length == other.length
            and bool(np.array_equal(self.words, other.words))
        )

    def __repr__(self) -> str:
        return f"BitArray({self.length}, {self.positions()})"


def _window(a: BitArray, offset: int, width: int) -> np.ndarray:
    """Words holding bits [offset, offset + width) of ``a``, shifted to bit 0."""
    nw = (width + WORD - 1) // WORD
    q, s = divmod(offset, WORD)
    src = a.words
    lo = src[q:q + nw + 1]
    if len(lo) < nw + 1:
        lo = np.concatenate([lo, np.zeros(nw + 1 - len(lo), dtype=np.uint64)])
    if s == 0:
        out = lo[:nw].copy()
    else:
        out = (lo[:nw] >> np.uint64(s)) | (lo[1:nw + 1] << np.uint64(WORD - s))
    rem = width % WORD
    if rem and nw:
        out[-1] &= np.uint64((1 << rem) - 1)
    return out


def and_aligned(arrays, width: int | None = None) -> BitArray:
    """AND of several arrays, each read from its own offset.

    Output bit ``i`` is the AND of bit ``i + offset`` over all inputs.  The
    output width defaults to the shortest available window; an explicit
    ``width`` longer than some input's window is an error.
    """
    arrays = list(arrays)
    if not arrays:
        raise ValueError("need at least one input")
    if any(off < 0 for _, off in arrays):
        raise ValueError("negative offset")
    avail = min(a.length - off for a, off in arrays)
    if width is None:
        width = avail
    if width < 0 or width > avail:
        raise ValueError("inconsistent window widths")
    acc = None
    for a, off in arrays:
        w = _window(a, off, width)
        acc = w if acc is None else (acc & w)
    return BitArray(width, acc)


def reverse_bits(a: BitArray) -> BitArray:
    n = a.length
    if n == 0:
        return BitArray(0)
    nw = len(a.words)
    w = a.words
    m16 = np.uint64(0xFFFF)
    rev = (
        (REV16[w & m16] << np.uint64(48))
        | (REV16[(w >> np.uint64(16)) & m16] << np.uint64(32))
        | (REV16[(w >> np.uint64(32)) & m16] << np.uint64(16))
        | REV16[(w >> np.uint64(48)) & m16]
    )[::-1].copy()
    # reversed words hold the bits aligned to the end of nw*64; drop the pad
    pad = nw * WORD - n
    full = BitArray(nw * WORD, rev)
    return BitArray(n, _window(full, pad, n))


def clear_range(a: BitArray, lo: int, hi: int) -> BitArray:
    """Zero 1-based positions lo..hi inclusive; lo = hi + 1 is a no-op."""
    if lo < 1 or hi > a.length or lo > hi + 1:
        raise IndexError("range out of bounds")
    out = a.copy()
    if lo > hi:
        return out
    b0, b1 = lo - 1, hi  # half-open bit range
    q0, q1 = b0 // WORD, (b1 - 1) // WORD
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    lo_mask = full << np.uint64(b0 % WORD)
    top = b1 - q1 * WORD
    hi_mask = full if top == WORD else np.uint64((1 << top) - 1)
    if q0 == q1:
        out.words[q0] &= ~(lo_mask & hi_mask)
    else:
        out.words[q0] &= ~lo_mask
        out.words[q0 + 1:q1] = 0
        out.words[q1] &= ~hi_mask
    return out
