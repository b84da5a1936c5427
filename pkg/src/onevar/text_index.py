"""Suffix array index over ``t + sep + reverse(t)``.

Gives constant-time longest-common-extension queries in both directions,
including the mixed case that compares a forward substring with a reversed
one.  Positions at the public interface are 1-based.

Layout of the concatenation ``T`` (0-based):

* ``T[0..n-1]``   the text,
* ``T[n]``        a separator larger than every byte,
* ``T[n+1..2n]``  the reversed text; ``T[n+1+k] = t[n-k]`` (1-based ``t``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
import pydivsufsort

from .bitvec import BitArray

SEP = 256
BLOCK = 32


class BlockRMQ:
    """Range minimum over an int array with O(N) extra words.

    In-block prefix/suffix minima plus a sparse table over block minima.
    """

    def __init__(self, a: np.ndarray):
        a = np.ascontiguousarray(a, dtype=np.int32)
        self.a = a
        n = len(a)
        nb = max(1, (n + BLOCK - 1) // BLOCK)
        pad = nb * BLOCK - n
        big = np.iinfo(np.int32).max
        padded = np.concatenate([a, np.full(pad, big, dtype=np.int32)]).reshape(nb, BLOCK)
        self.prefix = np.minimum.accumulate(padded, axis=1).ravel()
        self.suffix = np.minimum.accumulate(padded[:, ::-1], axis=1)[:, ::-1].ravel()
        bmin = padded.min(axis=1)
        table = [bmin]
        k = 1
        while (1 << k) <= nb:
            prev = table[-1]
            h = 1 << (k - 1)
            table.append(np.minimum(prev[:-h], prev[h:]))
            k += 1
        self.table = table
        grid = np.full((len(table), nb), big, dtype=np.int32)
        for k, row in enumerate(table):
            grid[k, :len(row)] = row
        self.grid = grid

    def _blocks(self, b0, b1):
        # min over whole blocks b0..b1 inclusive (b0 <= b1)
        span = b1 - b0 + 1
        k = span.bit_length() - 1
        row = self.table[k]
        return min(row[b0], row[b1 - (1 << k) + 1])

    def query(self, lo: int, hi: int) -> int:
        """min a[lo..hi] inclusive, lo <= hi."""
        b0, b1 = lo // BLOCK, hi // BLOCK
        if b0 == b1:
            return int(self.a[lo:hi + 1].min())
        m = min(self.suffix[lo], self.prefix[hi])
        if b1 - b0 > 1:
            m = min(m, self._blocks(b0 + 1, b1 - 1))
        return int(m)

    def query_many(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        lo = np.ascontiguousarray(lo, dtype=np.int64)
        hi = np.ascontiguousarray(hi, dtype=np.int64)
        return _rmq_many(self.a, self.prefix, self.suffix, self.grid, lo, hi)


@numba.njit(cache=True)
def rmq_one(a, prefix, suffix, grid, x, y):
    b0, b1 = x // BLOCK, y // BLOCK
    if b0 == b1:
        m = a[x]
        for k in range(x + 1, y + 1):
            if a[k] < m:
                m = a[k]
        return m
    m = min(suffix[x], prefix[y])
    if b1 - b0 > 1:
        c0, c1 = b0 + 1, b1 - 1
        span = c1 - c0 + 1
        lv = 0
        while (2 << lv) <= span:
            lv += 1
        m = min(m, grid[lv, c0], grid[lv, c1 - (1 << lv) + 1])
    return m


@numba.njit(cache=True)
def _rmq_many(a, prefix, suffix, grid, lo, hi):
    out = np.empty(len(lo), dtype=np.int64)
    for q in range(len(lo)):
        out[q] = rmq_one(a, prefix, suffix, grid, lo[q], hi[q])
    return out


SMALL_SORT = 512


def _as_bytes(arr: np.ndarray) -> np.ndarray | None:
    """t + sep + reverse(t) over a dense byte alphabet, sep on top.

    None when t uses all 256 byte values and sep does not fit.
    """
    used = np.zeros(256, dtype=bool)
    used[arr] = True
    sep = int(used.sum())
    if sep == 256:
        return None
    code = (np.cumsum(used) - 1).astype(np.uint8)
    n = len(arr)
    U = np.empty(2 * n + 1, dtype=np.uint8)
    U[:n] = code[arr]
    U[n] = sep
    U[n + 1:] = U[:n][::-1]
    return U


def _suffix_array(T: np.ndarray) -> np.ndarray:
    # the library wrapper's dtype casts dominate on tiny inputs
    if len(T) <= SMALL_SORT:
        seq = T.tolist()
        return np.array(sorted(range(len(seq)), key=lambda i: seq[i:]), dtype=np.int32)
    return pydivsufsort.divsufsort(T).astype(np.int32, copy=False)


@numba.njit(cache=True)
def _lcp_by_phi(T, sa):
    """lcp[r] = common prefix of suffixes sa[r] and sa[r+1]; lcp[N-1] = 0.

    Goes through the permuted array in text order, which keeps the
    character compares sequential.
    """
    N = len(T)
    phi = np.empty(N, dtype=np.int32)
    phi[sa[N - 1]] = -1
    for r in range(N - 1):
        phi[sa[r]] = sa[r + 1]
    plcp = np.empty(N, dtype=np.int32)
    h = 0
    for i in range(N):
        j = phi[i]
        if j < 0:
            plcp[i] = 0
            h = 0
            continue
        while i + h < N and j + h < N and T[i + h] == T[j + h]:
            h += 1
        plcp[i] = h
        if h > 0:
            h -= 1
    lcp = np.empty(N, dtype=np.int32)
    for r in range(N):
        lcp[r] = plcp[sa[r]]
    return lcp


@dataclass(frozen=True)
class OccBits:
    """Occurrence bits: bit ``k`` (0-based) is position ``base + k``."""

    base: int
    bits: BitArray

    def positions(self) -> list[int]:
        return [self.base + p - 1 for p in self.bits.positions()]

    def to_bools(self) -> np.ndarray:
        return self.bits.to_bools()


class TextIndex:
    def __init__(self, t: bytes):
        t = bytes(t)
        if len(t) == 0:
            raise ValueError("empty text")
        self.text = t
        n = self.n = len(t)
        arr = np.frombuffer(t, dtype=np.uint8)
        self.tarr = arr
        T = np.empty(2 * n + 1, dtype=np.int32)
        T[:n] = arr
        T[n] = SEP
        T[n + 1:] = arr[::-1]
        self.T = T
        self.N = len(T)
        # 32-bit sa/rank keep the random-access working set small
        small = _as_bytes(arr)
        sa = _suffix_array(T if small is None else small)
        self.sa = sa
        rank = np.empty(self.N, dtype=np.int32)
        rank[sa] = np.arange(self.N, dtype=np.int32)
        self.rank = rank
        self.lcp_arr = _lcp_by_phi(T if small is None else small, sa)
        self.rmq = BlockRMQ(self.lcp_arr)
        self._class_cache: dict[int, np.ndarray] = {}

    # --- raw extension on T (0-based indices) -------------------------
    def _ext(self, a: int, b: int) -> int:
        if a == b:
            return self._room(a)
        ra, rb = self.rank[a], self.rank[b]
        if ra > rb:
            ra, rb = rb, ra
        return self.rmq.query(int(ra), int(rb) - 1)

    def _room(self, a: int) -> int:
        n = self.n
        return n - a if a < n else self.N - a

    def ext_many(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Vectorized common extension of T suffixes at 0-based a, b."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        ra, rb = self.rank[a], self.rank[b]
        lo = np.minimum(ra, rb)
        hi = np.maximum(ra, rb) - 1
        eq = a == b
        out = np.empty(len(a), dtype=np.int64)
        ne = ~eq
        if ne.any():
            out[ne] = self.rmq.query_many(lo[ne], hi[ne])
        if eq.any():
            ae = a[eq]
            out[eq] = np.where(ae < self.n, self.n - ae, self.N - ae)
        return out

    # --- coordinate helpers -------------------------------------------
    def fwd(self, i):
        """T index of t[i..] (1-based i)."""
        return i - 1

    def rev_end(self, j):
        """T index of the reversed text read leftwards from t[j]."""
        return 2 * self.n + 1 - j

    def _check(self, *ps):
        for p in ps:
            if not 1 <= p <= self.n:
                raise IndexError(f"position {p} outside 1..{self.n}")

    # --- public queries -----------------------------------------------
    def lcp(self, i: int, j: int) -> int:
        self._check(i, j)
        return self._ext(i - 1, j - 1)

    def rlcp(self, i: int, j: int) -> int:
        self._check(i, j)
        return self._ext(self.rev_end(i), self.rev_end(j))

    def rev_match_len(self, i: int, j: int) -> int:
        self._check(i, j)
        return self._ext(i - 1, self.rev_end(j))

    def lcp_many(self, i, j):
        return self.ext_many(np.asarray(i) - 1, np.asarray(j) - 1)

    def rlcp_many(self, i, j):
        return self.ext_many(self.rev_end(np.asarray(i)), self.rev_end(np.asarray(j)))

    def rev_match_many(self, i, j):
        return self.ext_many(np.asarray(i) - 1, self.rev_end(np.asarray(j)))

    # --- substring classes --------------------------------------------
    def slot_classes(self, length: int) -> np.ndarray:
        """Class id per suffix-array slot; the id of T index x is
        ``slot_classes(length)[rank[x]]``."""
        c = self._class_cache.get(length)
        if c is None:
            brk = np.empty(self.N, dtype=np.int64)
            brk[0] = 0
            brk[1:] = self.lcp_arr[:-1] < length
            c = np.cumsum(brk)
            if len(self._class_cache) > 4:
                self._class_cache.clear()
            self._class_cache[length] = c
        return c

    def classes(self, length: int) -> np.ndarray:
        """Class id per T index; equal ids <=> equal length-`length` strings.

        Suffixes shorter than `length` get singleton classes.
        """
        return self.slot_classes(length)[self.rank]

    # --- occurrence arrays --------------------------------------------
    def occurrence_bools(self, s: bytes) -> np.ndarray:
        """Bool array over positions 1..n+1 (index 0..n)."""
        n = self.n
        m = len(s)
        out = np.zeros(n + 1, dtype=bool)
        if m == 0:
            out[:] = True
            return out
        if m > n:
            return out
        if m <= 16:
            ok = np.ones(n - m + 1, dtype=bool)
            arr = self.tarr
            for k, c in enumerate(s):
                ok &= arr[k:n - m + 1 + k] == c
            out[:n - m + 1] = ok
            return out
        lo, hi = self._sa_range(bytes(s))
        pos = self.sa[lo:hi]
        pos = pos[pos < n]
        out[pos] = True
        return out

    def _cmp_suffix(self, k: int, s: bytes) -> int:
        pos = int(self.sa[k])
        n, m = self.n, len(s)
        if pos < n:
            part, off, tail_big = self.text, pos, True
        elif pos == n:
            return 1
        else:
            part, off, tail_big = self._rtext, pos - n - 1, False
        pre = part[off:off + m]
        if len(pre) == m:
            return (pre > s) - (pre < s)
        head = s[:len(pre)]
        if pre != head:
            return (pre > head) - (pre < head)
        return 1 if tail_big else -1

    @property
    def _rtext(self) -> bytes:
        r = getattr(self, "_rt", None)
        if r is None:
            r = self._rt = self.text[::-1]
        return r

    def _sa_range(self, s: bytes) -> tuple[int, int]:
        lo, hi = 0, self.N
        while lo < hi:
            mid = (lo + hi) // 2
            if self._cmp_suffix(mid, s) < 0:
                lo = mid + 1
            else:
                hi = mid
        start = lo
        hi = self.N
        while lo < hi:
            mid = (lo + hi) // 2
            if self._cmp_suffix(mid, s) <= 0:
                lo = mid + 1
            else:
                hi = mid
        return start, lo


def build_index(t: bytes) -> TextIndex:
    return TextIndex(t)


def lcp(idx: TextIndex, i: int, j: int) -> int:
    return idx.lcp(i, j)


def rlcp(idx: TextIndex, i: int, j: int) -> int:
    return idx.rlcp(i, j)


def rev_match_len(idx: TextIndex, i: int, j: int) -> int:
    return idx.rev_match_len(i, j)


def occurrences(idx: TextIndex, s: bytes) -> OccBits:
    return OccBits(1, BitArray.from_bools(idx.occurrence_bools(bytes(s))))
