"""Instances pinned down by a non-periodic anchor v inside w1.

A non-periodic v has few occurrences close together (two occurrences
overlap by less than |v|/2), so the copies of v inside w2 or w3 are found
in a short window and each one fixes |w|.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .bitvec import BitArray
from .context import MatchContext, build_context
from .runs import RunsIndex, ceil_log2
from .text_index import OccBits, TextIndex


class _WindowTable:
    """Positions grouped by the content of their length-K window.

    ``order`` lists window starts (1-based) sorted by (class, position);
    ``lo[c]``/``hi[c]`` bound class c inside ``order``.
    """

    def __init__(self, idx: TextIndex, K: int):
        n = idx.n
        self.K = K
        cls = idx.classes(K)
        m = max(0, n - K + 1)
        pos = np.arange(1, m + 1, dtype=np.int64)
        self.fcls = cls[pos - 1]
        # class of reverse(t[i..i+K-1]) for each window start i
        self.rcls = cls[idx.rev_end(pos + K - 1)] if m else np.zeros(0, np.int64)
        self.cls = cls
        order = np.lexsort((pos, self.fcls))
        self.order = pos[order]
        self.okey = self.fcls[order]
        ncls = int(cls.max()) + 2
        self.lo = np.searchsorted(self.okey, np.arange(ncls), side="left")
        self.hi = np.searchsorted(self.okey, np.arange(ncls), side="right")
        self.stride = len(cls) + 2
        self.full = self.okey * self.stride + self.order

    def first_at_or_after(self, c: np.ndarray, at: np.ndarray) -> np.ndarray:
        """Slot in ``order`` of the first window of class c starting >= at
        (or the end of the class)."""
        return np.searchsorted(self.full, c * self.stride + at, side="left")

    def positions(self, c: int, a: int, b: int) -> np.ndarray:
        """Window starts of class c in [a..b]."""
        lo, hi = int(self.lo[c]), int(self.hi[c])
        seg = self.order[lo:hi]
        x = int(np.searchsorted(seg, a, side="left"))
        y = int(np.searchsorted(seg, b, side="right"))
        return seg[x:y]


@dataclass
class VFindIndex:
    lam: int
    n: int
    long_table: _WindowTable | None
    short_table: _WindowTable | None
    B: np.ndarray = field(repr=False)
    Brev: np.ndarray = field(repr=False)

    @property
    def long_len(self) -> int:
        return self.long_table.K if self.long_table else self.n + 1

    @property
    def short_len(self) -> int:
        return self.short_table.K if self.short_table else self.n + 1


def _pointers(tab: _WindowTable | None, lam: int):
    """Slot of the leftmost j >= i + lam whose window equals t_i (B) or its
    reversal (Brev); -1 if none."""
    if tab is None or not len(tab.fcls):
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    m = len(tab.fcls)
    i = np.arange(1, m + 1, dtype=np.int64)
    out = []
    for c in (tab.fcls, tab.rcls):
        slot = tab.first_at_or_after(c, i + lam)
        ok = slot < len(tab.order)
        ok[ok] &= tab.okey[slot[ok]] == c[ok]
        out.append(np.where(ok, slot, -1))
    return out[0], out[1]


def build_vfind(idx: TextIndex, rix: RunsIndex | None, lam: int) -> VFindIndex:
    if lam < 0:
        raise ValueError("need lam >= 0")
    n = idx.n
    lg = ceil_log2(n)
    K1 = max(1, lg)
    K2 = max(1, ceil_log2(lg) if lg > 1 else 1) + 1
    long_t = _WindowTable(idx, K1) if K1 <= n else None
    short_t = _WindowTable(idx, K2) if K2 < K1 and K2 <= n else None
    B, Br = _pointers(long_t, lam)
    return VFindIndex(lam, n, long_t, short_t, B, Br)


class VFindCache:
    """Indexes per gap length, built on first request."""

    def __init__(self, idx: TextIndex, rix: RunsIndex | None = None):
        self.idx, self.rix = idx, rix
        self._by_lam: dict[int, VFindIndex] = {}
        self._lock = threading.Lock()

    def get(self, lam: int) -> VFindIndex:
        with self._lock:
            got = self._by_lam.get(lam)
            if got is None:
                got = self._by_lam[lam] = build_vfind(self.idx, self.rix, lam)
            return got


@dataclass(frozen=True)
class OccNearby:
    forward: tuple[int, ...]
    reversed: tuple[int, ...]
    v_len: int


def find_nearby(vf: VFindIndex, idx: TextIndex, rix: RunsIndex, q: int, q2: int) -> OccNearby:
    """Occurrences of v = t[q..q2-1] and of its reversal starting in
    [q2+lam .. q2+lam+2|v|]."""
    vl = q2 - q
    if vl < 1 or q < 1 or q2 - 1 > idx.n:
        raise IndexError("invalid anchor")
    if vl >= 2 and rix.substring_run(q, q2 - 1) is not None:
        raise ValueError("anchor is periodic")
    n = idx.n
    a = q2 + vf.lam
    b = min(q2 + vf.lam + 2 * vl, n - vl + 1)
    if a > b:
        return OccNearby((), (), vl)
    if vl >= vf.long_len:
        tab = vf.long_table
    elif vl >= vf.short_len:
        tab = vf.short_table
    else:
        tab = None
    if tab is None:
        js = np.arange(a, b + 1, dtype=np.int64)
        fw = js[idx.lcp_many(np.full(len(js), q), js) >= vl]
        rv = js[idx.rev_match_many(js, np.full(len(js), q2 - 1)) >= vl]
    else:
        fw = tab.positions(int(tab.cls[q - 1]), a, b)
        fw = fw[idx.lcp_many(np.full(len(fw), q), fw) >= vl]
        rv = tab.positions(int(tab.cls[idx.rev_end(q2 - 1)]), a, b)
        rv = rv[idx.rev_match_many(rv, np.full(len(rv), q2 - 1)) >= vl]
    return OccNearby(tuple(fw.tolist()), tuple(rv.tolist()), vl)


def candidate_betas(p, q1: int, nearby: OccNearby, second: OccNearby | None = None) -> set[int]:
    """Substitution lengths implied by copies of the anchor in later
    substitutions, limited to (3|v|/2 .. 2|v|].

    ``nearby`` holds copies after s2.  When x1 and x2 differ, ``second``
    holds the copies met by the next hop: forward copies in w3 when
    x3 = x1 (window after q1 + |v| + |s2 s3| + |v|), or reversed copies
    in w3 when x3 = x2.
    """
    segs, dirs = p.segments, p.directions
    vl = nearby.v_len
    out = set()
    if len(dirs) >= 2 and dirs[0] is dirs[1]:
        out = {q2 - q1 - len(segs[1]) for q2 in nearby.forward}
    elif len(dirs) >= 3 and second is not None:
        if dirs[2] is dirs[0]:
            for q3 in second.forward:
                num = q3 - q1 - len(segs[1]) - len(segs[2])
                if num % 2 == 0:
                    out.add(num // 2)
        else:
            for q2 in nearby.reversed:
                out.update(q3 - q2 - len(segs[2]) for q3 in second.reversed if q3 > q2)
    elif len(dirs) == 2:
        raise ValueError("pattern s1 x s2 ~x s3 has no forward hop; use pal_pattern_occ")
    return {b for b in out if 3 * vl < 2 * b <= 4 * vl}


def _ctx(ctx, p) -> MatchContext:
    return ctx if isinstance(ctx, MatchContext) else build_context(ctx, p, 0)


def fixed_len_instances(ctx, p, h1: int, h2: int, beta: int) -> OccBits:
    """occ[i] = 1 iff an instance with |w| = beta starts at i and its w1
    contains t[h1..h2]; covers i in [h2-beta-|s1|+1 .. h1-|s1|]."""
    ctx = _ctx(ctx, p)
    if beta < h2 - h1 + 1:
        raise ValueError("need beta >= |v|")
    s1 = ctx.sl[0]
    lo = h2 - beta - s1 + 1
    i = np.arange(lo, h1 - s1 + 1, dtype=np.int64)
    ok = ctx.verify(i + s1, np.full(len(i), beta, dtype=np.int64))
    return OccBits(int(lo), BitArray.from_bools(ok))


def pal_pattern_occ(ctx, p, h1: int, h2: int, q: int) -> OccBits:
    """Pattern s1 x s2 ~x s3: occ[i] = 1 iff an instance starts at i, its
    w1 covers t[h1..h2], and the copy of t[h1..h2] that the reversed
    substitution produces starts at q."""
    ctx = _ctx(ctx, p)
    if ctx.r != 3 or ctx.dirs[0] is ctx.dirs[1]:
        raise ValueError("pattern must have shape s1 x s2 ~x s3")
    s1, s2, _ = ctx.sl
    vl = h2 - h1 + 1
    lo = h1 - s1 - vl
    i = np.arange(lo, h1 - s1 + 1, dtype=np.int64)
    ok = np.zeros(len(i), dtype=bool)
    twice_mid = h2 + 1 + q - s2
    if twice_mid % 2 == 0:
        mid = twice_mid // 2  # start of s2
        P1 = i + s1
        beta = mid - P1
        good = (beta > h2 - P1) & (P1 <= h1)
        if good.any():
            k = np.flatnonzero(good)
            ok[k] = ctx.verify(P1[k], beta[k])
    return OccBits(int(lo), BitArray.from_bools(ok))
