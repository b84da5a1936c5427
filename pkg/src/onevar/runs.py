"""Runs (maximal repetitions) of a text and queries over them.

Runs are found from Lyndon roots: for both the natural and the inverted byte
order, the longest Lyndon word starting at each position is a candidate
root, and extending it with forward/backward common extensions yields every
run exactly (each run has a Lyndon root that is a longest Lyndon prefix of
its suffix under one of the two orders).
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .text_index import TextIndex, rmq_one


@dataclass(frozen=True, order=True)
class Run:
    start: int
    end: int
    period: int

    @property
    def length(self) -> int:
        return self.end - self.start + 1


@numba.njit(cache=True)
def _lyndon_by_lce(arr, rank, lcp, prefix, suffix, grid, invert):
    """Longest Lyndon prefix of every suffix, under the byte order or its
    inverse (a shorter suffix is smaller in both).  Stack-based next
    smaller suffix; suffixes are compared with one LCE query each."""
    n = len(arr)
    nsv = np.empty(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        j = i + 1
        while j < n:
            ell = 0
            while ell < 8 and j + ell < n and arr[i + ell] == arr[j + ell]:
                ell += 1
            if ell == 8:
                ra, rb = rank[i], rank[j]
                if ra > rb:
                    ra, rb = rb, ra
                ell = rmq_one(lcp, prefix, suffix, grid, ra, rb - 1)
            if j + ell >= n:
                break  # t[j:] is a prefix of t[i:]
            x, y = arr[j + ell], arr[i + ell]
            if (x < y) != invert:
                break
            j = nsv[j]
        nsv[i] = j
    return nsv - np.arange(n)


@numba.njit(cache=True)
def _extend_roots(arr, lyn, cap):
    """Extend each root t[s..s+p-1] by direct comparison, up to ``cap``
    bytes per side.  Returns (start, end, period) of the runs found and
    the 1-based roots whose extension reached the cap on some side."""
    n = len(arr)
    st = np.empty(n, dtype=np.int64)
    en = np.empty(n, dtype=np.int64)
    pe = np.empty(n, dtype=np.int64)
    todo = np.empty(n, dtype=np.int64)
    m = 0
    k = 0
    for a in range(n):
        d = lyn[a]
        if a + d >= n:
            continue
        right = 0
        while right < cap and a + right + d < n and arr[a + right] == arr[a + right + d]:
            right += 1
        left = 0
        while left < cap and a - 1 - left >= 0 and arr[a - 1 - left] == arr[a - 1 - left + d]:
            left += 1
        if right == cap or left == cap:
            todo[k] = a + 1
            k += 1
        elif right + left >= d:
            st[m] = a + 1 - left
            en[m] = a + d + right
            pe[m] = d
            m += 1
    return st[:m], en[:m], pe[:m], todo[:k]


def ceil_log2(n: int) -> int:
    return max(1, (n - 1).bit_length()) if n > 1 else 1


def _thresholds(n: int) -> tuple[int, int]:
    lg = ceil_log2(n)
    llg = max(1, ceil_log2(lg))
    return lg, llg


class RunsIndex:
    def __init__(self, idx: TextIndex):
        self.idx = idx
        n = self.n = idx.n
        arr = idx.tarr
        cands = []
        rmq = idx.rmq
        for invert in (False, True):
            lyn = _lyndon_by_lce(arr, idx.rank, rmq.a, rmq.prefix, rmq.suffix, rmq.grid, invert)
            st, en, pe, s = _extend_roots(arr, lyn, 32)
            cands.append(np.stack([st, en, pe], axis=1))
            # long extensions go through the index
            p = lyn[s - 1]
            right = idx.lcp_many(s, s + p)
            end = s + p + right - 1
            left = np.zeros(len(s), dtype=np.int64)
            hl = s > 1
            if hl.any():
                left[hl] = idx.rlcp_many(s[hl] - 1, s[hl] + p[hl] - 1)
            start = s - left
            good = end - start + 1 >= 2 * p
            cands.append(np.stack([start[good], end[good], p[good]], axis=1))
        allc = np.concatenate(cands, axis=0) if cands else np.zeros((0, 3), np.int64)
        if len(allc):
            # start and period determine the run, so one int key dedups
            key = allc[:, 0] * (n + 1) + allc[:, 2]
            _, first = np.unique(key, return_index=True)
            allc = allc[first]
        self.starts = allc[:, 0].copy()
        self.ends = allc[:, 1].copy()
        self.periods = allc[:, 2].copy()
        self.lg, self.llg = _thresholds(n)
        self._build_levels()
        self._build_period_maps()
        self._roots: dict[int, tuple[int, int]] = {}

    # --- basic views --------------------------------------------------
    def __len__(self) -> int:
        return len(self.starts)

    def run(self, k: int) -> Run:
        return Run(int(self.starts[k]), int(self.ends[k]), int(self.periods[k]))

    def all_runs(self) -> list[Run]:
        return [self.run(k) for k in range(len(self))]

    # --- lookup structures ----------------------------------------------
    def _build_levels(self):
        lengths = self.ends - self.starts + 1
        lv = np.zeros(len(lengths), dtype=np.int64)
        if len(lengths):
            lv = np.floor(np.log2(lengths)).astype(np.int64)
        self.levels = {}
        for k in np.unique(lv):
            sel = np.flatnonzero(lv == k)
            order = sel[np.argsort(self.starts[sel], kind="stable")]
            self.levels[int(k)] = (self.starts[order], self.ends[order], self.periods[order], order)
        self.max_level = int(lv.max()) if len(lv) else -1

    def _build_period_maps(self):
        self.by_period: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = {}
        if not len(self.periods):
            return
        order = np.lexsort((self.starts, self.periods))
        ps = self.periods[order]
        cuts = np.flatnonzero(np.diff(ps)) + 1
        for grp in np.split(order, cuts):
            d = int(self.periods[grp[0]])
            st = self.starts[grp]
            en = self.ends[grp]
            # runs sharing a period overlap in < d positions, so sorting by
            # start also sorts by end
            self.by_period[d] = (st, en, grp, en.copy())

    def period_lists(self, d: int) -> dict[str, list[int]]:
        """Start positions of runs with period d, filtered by length."""
        if d not in self.by_period:
            return {"R": [], "R1": [], "R2": []}
        st, en, _, _ = self.by_period[d]
        ln = en - st + 1
        return {
            "R": st.tolist(),
            "R1": st[ln >= self.lg].tolist(),
            "R2": st[ln >= self.llg].tolist(),
        }

    def run_with_period_containing(self, d: int, i: int, j: int) -> int:
        """Id of the run with period d containing [i..j], or -1."""
        entry = self.by_period.get(d)
        if entry is None:
            return -1
        st, en, ids, _ = entry
        k = int(np.searchsorted(st, i, side="right")) - 1
        if k >= 0 and en[k] >= j:
            return int(ids[k])
        return -1

    def runs_with_period_ending_in(self, d: int, lo: int, hi: int) -> np.ndarray:
        entry = self.by_period.get(d)
        if entry is None or lo > hi:
            return np.zeros(0, dtype=np.int64)
        st, en, ids, _ = entry
        a = int(np.searchsorted(en, lo, side="left"))
        b = int(np.searchsorted(en, hi, side="right"))
        return ids[a:b]

    def runs_with_period_starting_in(self, d: int, lo: int, hi: int) -> np.ndarray:
        entry = self.by_period.get(d)
        if entry is None or lo > hi:
            return np.zeros(0, dtype=np.int64)
        st, en, ids, _ = entry
        a = int(np.searchsorted(st, lo, side="left"))
        b = int(np.searchsorted(st, hi, side="right"))
        return ids[a:b]

    # --- substring periodicity ------------------------------------------
    def substring_run_id(self, i: int, j: int) -> int:
        """Run id containing t[i..j] with 2*period <= j-i+1, or -1."""
        ell = j - i + 1
        if ell < 2:
            return -1
        for k in range(ell.bit_length() - 1, self.max_level + 1):
            lvl = self.levels.get(k)
            if lvl is None:
                continue
            st, en, pe, ids = lvl
            pos = int(np.searchsorted(st, i, side="right")) - 1
            lim = i - (1 << (k + 1))
            while pos >= 0 and st[pos] > lim:
                if en[pos] >= j and 2 * pe[pos] <= ell:
                    return int(ids[pos])
                pos -= 1
        return -1

    def substring_run_ids(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        """Vectorized substring_run_id."""
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        out = np.full(len(i), -1, dtype=np.int64)
        ell = j - i + 1
        for k, (st, en, pe, ids) in self.levels.items():
            cand = (ell >= 2) & (ell < (1 << (k + 1)))
            cand &= out < 0
            if not cand.any():
                continue
            ci = np.flatnonzero(cand)
            pos = np.searchsorted(st, i[ci], side="right") - 1
            lim = i[ci] - (1 << (k + 1))
            while len(ci):
                alive = pos >= 0
                alive[alive] &= st[pos[alive]] > lim[alive]
                ci, pos, lim = ci[alive], pos[alive], lim[alive]
                if not len(ci):
                    break
                hit = (en[pos] >= j[ci]) & (2 * pe[pos] <= ell[ci])
                out[ci[hit]] = ids[pos[hit]]
                keep = ~hit
                ci, pos, lim = ci[keep], pos[keep] - 1, lim[keep]
        return out

    def substring_run(self, i: int, j: int):
        if not 1 <= i <= j <= self.n:
            raise IndexError("invalid range")
        k = self.substring_run_id(i, j)
        if k < 0:
            return None
        r = self.run(k)
        return r.period, r

    # --- Lyndon roots ---------------------------------------------------
    def _find(self, run: Run) -> int:
        entry = self.by_period.get(run.period)
        if entry is not None:
            st, en, ids, _ = entry
            k = int(np.searchsorted(st, run.start))
            if k < len(st) and st[k] == run.start and en[k] == run.end:
                return int(ids[k])
        raise ValueError(f"{run} is not a run of this text")

    def roots(self, k: int) -> tuple[int, int]:
        got = self._roots.get(k)
        if got is None:
            s, d = int(self.starts[k]), int(self.periods[k])
            rank = self.idx.rank
            fw = rank[s - 1:s - 1 + d]
            ell = s + int(np.argmin(fw))
            ends = np.arange(s + d - 1, s + 2 * d - 1)
            bw = rank[self.idx.rev_end(ends)]
            ell0 = int(ends[int(np.argmin(bw))])
            got = self._roots[k] = (ell, ell0)
        return got


def compute_runs(idx_or_text) -> RunsIndex:
    idx = idx_or_text if isinstance(idx_or_text, TextIndex) else TextIndex(idx_or_text)
    return RunsIndex(idx)


def substring_run(rix: RunsIndex, i: int, j: int):
    return rix.substring_run(i, j)


def lyndon_root(rix: RunsIndex, run: Run) -> int:
    return rix.roots(rix._find(run))[0]


def reversed_lyndon_root(rix: RunsIndex, run: Run) -> int:
    return rix.roots(rix._find(run))[1]


def periodic_extension(idx: TextIndex, a: int, b: int, d: int) -> tuple[int, int]:
    """Lengths of the longest prefix and suffix of t[a..b] with period d."""
    if not (1 <= a <= b <= idx.n) or d < 1:
        raise IndexError("invalid range")
    ln = b - a + 1
    if d >= ln:
        return ln, ln
    pref = min(ln, d + idx.lcp(a, a + d))
    suff = min(ln, d + idx.rlcp(b, b - d))
    return pref, suff
