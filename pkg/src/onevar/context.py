"""Shared index bundle for one text and one pattern.

Holds the text index, the runs index, per-segment occurrence arrays and the
instance test.  Everything is built on first use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .pattern import FWD, Pattern, normalize, parse_pattern
from .runs import RunsIndex
from .text_index import TextIndex

@dataclass(frozen=True)
class MatchConfig:
    min_sub_len: int = 1
    small_cutoff: int | None = None  # None: ceil(log2 n)
    threads: int = 1


@dataclass(frozen=True, order=True)
class InstanceFamily:
    first_start: int
    start_step: int
    first_sublen: int
    len_step: int
    count: int

    def members(self) -> Iterator[tuple[int, int]]:
        for k in range(self.count):
            yield (self.first_start + k * self.start_step,
                   self.first_sublen + k * self.len_step)



def _solve_lin(a: int, b: int, d: int):
    """Solutions x in [0, d) of a*x = b (mod d); None means every x."""
    a %= d
    b %= d
    if a == 0:
        return None if b == 0 else []
    g = math.gcd(a, d)
    if b % g:
        return []
    a1, b1, d1 = a // g, b // g, d // g
    x0 = (b1 * pow(a1, -1, d1)) % d1 if d1 > 1 else 0
    return [x0 + k * d1 for k in range(g)]


def _combine(cons, d: int):
    """Intersect linear congruences [(a, b)]; None means unconstrained."""
    sols = None
    for a, b in cons:
        s = _solve_lin(a, b, d)
        if s is None:
            continue
        if sols is None:
            sols = set(s)
        else:
            sols &= set(s)
        if not sols:
            return []
    return None if sols is None else sorted(sols)


def _pref_period(s: bytes, d: int) -> int:
    k = d
    while k < len(s) and s[k] == s[k - d]:
        k += 1
    return min(k, len(s))


def _suff_period(s: bytes, d: int) -> int:
    return _pref_period(s[::-1], d)


class MatchContext:
    def __init__(self, t: bytes, p: Pattern, cfg: MatchConfig, idx=None, rix=None):
        self.t = bytes(t)
        self.n = len(self.t)
        self.p = normalize(p)
        self.cfg = cfg
        self.r = self.p.r
        self.segs = self.p.segments
        self.sl = [len(s) for s in self.segs]
        self.dirs = self.p.directions
        # cum[k] = |s_1..s_k| (cum[0] = 0)
        self.cum = [0]
        for x in self.sl:
            self.cum.append(self.cum[-1] + x)
        self._idx = idx
        self._rix = rix
        self._D = None
        self._Dpad = None
        self._root_cache: dict[int, tuple[int, int]] = {}

    # --- lazily built structures ----------------------------------------
    @property
    def idx(self) -> TextIndex:
        if self._idx is None:
            self._idx = TextIndex(self.t)
        return self._idx

    @property
    def rix(self) -> RunsIndex:
        if self._rix is None:
            self._rix = RunsIndex(self.idx)
        return self._rix

    @property
    def D(self) -> list[np.ndarray]:
        # D[z][pos] for 1-based pos in 1..n+1, padded so any pos in
        # [-(n+2), 2n+2] can be gathered through _dget
        if self._D is None:
            D = []
            for s in self.segs:
                b = np.zeros(self.n + 2, dtype=bool)
                b[1:] = self.idx.occurrence_bools(s)
                D.append(b)
            self._D = D
        return self._D

    def _dget(self, z: int, pos: np.ndarray) -> np.ndarray:
        if self._Dpad is None:
            # False at 0 and n+2, so clipping sends out-of-range to False
            self._Dpad = [np.append(b, False) for b in self.D]
        return self._Dpad[z - 1][np.clip(pos, 0, self.n + 2)]

    def S(self, a: int, b: int) -> int:
        """|s_a ... s_b| (1-based, inclusive; 0 when a > b)."""
        if a > b:
            return 0
        return self.cum[b] - self.cum[a - 1]

    # --- verification -----------------------------------------------------
    def verify(self, P1: np.ndarray, beta: np.ndarray) -> np.ndarray:
        """Instance test for first-substitution starts P1 and lengths beta."""
        P1 = np.asarray(P1, dtype=np.int64)
        beta = np.asarray(beta, dtype=np.int64)
        n, r = self.n, self.r
        start = P1 - self.sl[0]
        end = start + self.cum[r] + (r - 1) * beta - 1
        ok = (start >= 1) & (start <= n) & (end <= n) & (beta >= 0)
        ok &= self._dget(1, np.where(ok, start, 1))
        for z in range(2, r + 1):
            if not ok.any():
                return ok
            sz = P1 + (z - 1) * beta + self.S(2, z - 1)
            ok &= self._dget(z, np.where(ok, sz, 1))
        pos = beta > 0
        for z in range(2, r):
            sel = ok & pos
            if not sel.any():
                break
            k = np.flatnonzero(sel)
            a = P1[k]
            b = beta[k]
            Pz = a + (z - 1) * b + self.S(2, z)
            if self.dirs[z - 1] is FWD:
                m = self.idx.lcp_many(a, Pz)
            else:
                m = self.idx.rev_match_many(Pz, a + b - 1)
            ok[k[m < b]] = False
        return ok

    def verify_one(self, P1: int, beta: int) -> bool:
        return bool(self.verify(np.array([P1]), np.array([beta]))[0])

    def has_period(self, a: int, b: int, d: int) -> bool:
        """Whether t[a..b] has period d (empty and short ranges do)."""
        if b - a + 1 <= d:
            return True
        return self.idx.lcp(a, a + d) >= b - a + 1 - d


def build_context(t: bytes, p, min_sub_len: int = 1) -> MatchContext:
    if not isinstance(p, Pattern):
        p = parse_pattern(p)
    return MatchContext(bytes(t), p, MatchConfig(min_sub_len=min_sub_len))
