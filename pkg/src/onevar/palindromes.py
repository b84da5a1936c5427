"""Palindrome queries: Manacher radii plus an eertree with series links."""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np


@numba.njit(cache=True)
def _manacher(s):
    # pal[m] = length of the longest palindrome centred at m/2 (0-based,
    # m = i + j for a palindrome t[i..j]); m ranges over 0..2n-2
    n = len(s)
    m = 2 * n - 1
    rad = np.zeros(m, dtype=np.int64)
    # work on the interleaved string via index arithmetic
    c = 0
    right = -1
    for k in range(m):
        # k even: centre on char k//2; k odd: between (k-1)//2 and (k+1)//2
        r = 0
        if k <= right:
            mirror = 2 * c - k
            r = min(rad[mirror], right - k)
        # expand; positions at distance r+1 in interleaved coords
        while True:
            lo = k - r - 1
            hi = k + r + 1
            if lo < 0 or hi >= m:
                break
            if lo % 2 == 1:  # separator slots always match
                r += 1
                continue
            if s[lo // 2] != s[hi // 2]:
                break
            r += 1
        rad[k] = r
        if k + r > right:
            c = k
            right = k + r
    out = np.empty(m, dtype=np.int64)
    for k in range(m):
        r = rad[k]
        if k % 2 == 0:
            out[k] = 2 * (r // 2) + 1
        else:
            out[k] = 2 * ((r + 1) // 2)
    return out


class Eertree:
    """Palindromic tree of a text with suffix and series links."""

    def __init__(self, t: bytes):
        self.length = [-1, 0]
        self.link = [0, 0]
        self.diff = [0, 0]
        self.series = [0, 0]
        self.edges: list[dict[int, int]] = [{}, {}]
        self.psuf = [1] * (len(t) + 1)  # psuf[j] for prefix t[1..j]
        last = 1
        for j, c in enumerate(t):
            cur = last
            while True:
                ln = self.length[cur]
                if j - ln - 1 >= 0 and t[j - ln - 1] == c:
                    break
                cur = self.link[cur]
            nxt = self.edges[cur].get(c)
            if nxt is None:
                ln = self.length[cur] + 2
                if ln == 1:
                    lk = 1
                else:
                    w = self.link[cur]
                    while True:
                        wl = self.length[w]
                        if j - wl - 1 >= 0 and t[j - wl - 1] == c:
                            break
                        w = self.link[w]
                    lk = self.edges[w][c]
                nxt = len(self.length)
                self.length.append(ln)
                self.link.append(lk)
                d = ln - self.length[lk]
                self.diff.append(d)
                self.series.append(self.series[lk] if d == self.diff[lk] else lk)
                self.edges.append({})
                self.edges[cur][c] = nxt
            last = nxt
            self.psuf[j + 1] = nxt

    def node_count(self) -> int:
        return len(self.length) - 2

    def longest_suffix_at_most(self, j: int, limit: int) -> int:
        """Longest palindromic suffix of t[1..j] with length <= limit."""
        a = self.psuf[j]
        L, S, D = self.length, self.series, self.diff
        while L[a] > limit:
            top = L[a]
            delta = D[a]
            low = L[S[a]] + delta  # shortest length in a's series
            if limit >= low:
                k = -(-(top - limit) // delta)
                return top - k * delta
            a = S[a]
        return L[a]


@dataclass(frozen=True)
class PalPair:
    u_len: int
    v_len: int


class PalIndex:
    def __init__(self, t: bytes):
        t = bytes(t)
        if not t:
            raise ValueError("empty text")
        self.text = t
        self.n = len(t)
        self.pal = _manacher(np.frombuffer(t, dtype=np.uint8).copy())
        self.tree = Eertree(t)
        self.rtree = Eertree(t[::-1])

    def _check(self, i, j):
        if not 1 <= i <= j <= self.n:
            raise IndexError("invalid range")

    def is_palindrome(self, i: int, j: int) -> bool:
        self._check(i, j)
        return bool(self.pal[i + j - 2] >= j - i + 1)

    def longest_pal_suffix(self, i: int, j: int) -> int:
        self._check(i, j)
        return self.tree.longest_suffix_at_most(j, j - i + 1)

    def longest_pal_prefix(self, i: int, j: int) -> int:
        self._check(i, j)
        n = self.n
        return self.rtree.longest_suffix_at_most(n - i + 1, j - i + 1)

    def pal_pair_decompose(self, i: int, j: int) -> PalPair | None:
        self._check(i, j)
        ln = j - i + 1
        if self.is_palindrome(i, j):
            return PalPair(0, ln)
        u = self.longest_pal_prefix(i, j)
        if u < ln and self.is_palindrome(i + u, j):
            return PalPair(u, ln - u)
        v = self.longest_pal_suffix(i, j)
        if v < ln and self.is_palindrome(i, j - v):
            return PalPair(ln - v, v)
        return None


def build_pal_index(t: bytes) -> PalIndex:
    return PalIndex(t)


def is_palindrome(pix: PalIndex, i: int, j: int) -> bool:
    return pix.is_palindrome(i, j)


def longest_pal_suffix(pix: PalIndex, i: int, j: int) -> int:
    return pix.longest_pal_suffix(i, j)


def longest_pal_prefix(pix: PalIndex, i: int, j: int) -> int:
    return pix.longest_pal_prefix(i, j)


def pal_pair_decompose(pix: PalIndex, i: int, j: int) -> PalPair | None:
    return pix.pal_pair_decompose(i, j)


def pal_pair_step(u_len: int, d: int, delta_h: int) -> int:
    if d < 1 or not 0 <= u_len < d:
        raise ValueError("need d >= 1 and 0 <= u_len < d")
    return (u_len - 2 * delta_h) % d
