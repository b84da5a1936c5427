"""Find every instance of a one-variable pattern and report it compactly.

Instances are split into three disjoint groups by the substitution length
``beta`` and the shape of the first substitution ``w1``:

* ``beta <= B`` (a small cutoff, about log n): a direct sweep per length.
* ``w1`` lies in a run with period ``d`` and ``3d <= beta``: handled per
  run, producing arithmetic families whose members share every phase
  relation inside the runs.
* everything else: each length bucket has an anchor grid; the leftmost
  grid anchor inside ``w1`` is a non-periodic string (or is extended to one
  through the end of its run), and its copies in later substitutions pin
  ``beta`` down to a handful of values.

Each instance belongs to exactly one group and, inside a group, to exactly
one generator, so the report has no duplicates by construction.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterator

import numpy as np

from .anchor_periodic import break_windows
from .context import (InstanceFamily, MatchConfig, MatchContext, _combine,
                      _pref_period, _suff_period)
from .pattern import FWD, Instance, Pattern, parse_pattern
from .runs import ceil_log2
from .text_index import TextIndex

SMALL_TEXT = 64


class MatchReport:
    """All instances as arithmetic families.

    ``rows`` is an (k, 5) int64 array of (first_start, start_step,
    first_sublen, len_step, count), sorted; ``families`` materializes it.
    """

    def __init__(self, rows: np.ndarray, n: int, pattern: Pattern,
                 config: MatchConfig | None = None):
        self.rows = rows
        self.n = n
        self.pattern = pattern
        self.config = config or MatchConfig()
        self.total = int(rows[:, 4].sum()) if len(rows) else 0
        self._families = None

    @property
    def families(self) -> list[InstanceFamily]:
        if self._families is None:
            self._families = [InstanceFamily(*r) for r in self.rows.tolist()]
        return self._families

    def to_json_obj(self) -> dict:
        keys = ("start", "start_step", "sub_len", "len_step", "count")
        return {
            "n": self.n,
            "total": self.total,
            "families": [dict(zip(keys, r)) for r in self.rows.tolist()],
        }

    def instance_set(self) -> set[tuple[int, int]]:
        s, b = enumerate_arrays(self)
        return set(zip(s.tolist(), b.tolist()))


# ---------------------------------------------------------------------------


def _anchor_fits(L: int, lo: int) -> bool:
    return L + (L + 1) // 2 - 1 <= lo and 3 * (L // 2) <= lo


def bucket_grid(first_lo: int, n: int) -> list[tuple[int, int, int, int]]:
    """Length buckets (L, g, lo, hi) covering [first_lo, n].

    Each bucket gets an anchor length L and grid step g = ceil(L/2) so that
    any substitution of length in [lo, hi] contains a whole anchor, and a
    periodic anchor has period at most lo/3.
    """
    out = []
    lo = max(1, first_lo)
    while lo <= n:
        L = max(1, (2 * lo) // 3 - 2)
        while _anchor_fits(L + 1, lo):
            L += 1
        while L > 1 and not _anchor_fits(L, lo):
            L -= 1
        hi = 2 * L
        out.append((L, (L + 1) // 2, lo, hi))
        lo = hi + 1
    return out


# ---------------------------------------------------------------------------



class _Matcher(MatchContext):
    def __init__(self, t: bytes, p: Pattern, cfg: MatchConfig, idx=None, rix=None):
        super().__init__(t, p, cfg, idx, rix)
        self.fam: list[tuple[int, int, int, int, int]] = []
        self.fam_arrays: list[np.ndarray] = []

    # --- output -----------------------------------------------------------
    def emit(self, start, start_step, sub_len, len_step, count):
        if count <= 0:
            return
        if count == 1:
            start_step = len_step = 0
        self.fam.append((int(start), int(start_step), int(sub_len), int(len_step), int(count)))

    def emit_pairs(self, P1: np.ndarray, beta: np.ndarray):
        k = len(P1)
        rows = np.zeros((k, 5), dtype=np.int64)
        rows[:, 0] = P1 - self.sl[0]
        rows[:, 2] = beta
        rows[:, 4] = 1
        self.fam_arrays.append(rows)

    def rows(self) -> np.ndarray:
        parts = list(self.fam_arrays)
        if self.fam:
            parts.append(np.array(self.fam, dtype=np.int64).reshape(-1, 5))
        if not parts:
            return np.zeros((0, 5), dtype=np.int64)
        return np.concatenate(parts, axis=0)

    # --- driver -----------------------------------------------------------
    def run(self) -> list[tuple[int, int, int, int, int]]:
        if self.r == 1:
            self._plain()
        elif self.r == 2:
            self._two_segment()
        else:
            self.B = self.cfg.small_cutoff
            if self.B is None:
                # on short texts the direct sweep over every length is the
                # cheapest route and skips building the runs index
                self.B = self.n if self.n <= SMALL_TEXT else ceil_log2(self.n)
            self.B = max(self.B, self.cfg.min_sub_len - 1)
            self._small_sweep()
            if self.B < self._max_beta():
                self._run_route()
                self._anchor_route()
        return self.rows()

    # r = 1 ----------------------------------------------------------------
    def _plain(self):
        occ = np.flatnonzero(self.idx.occurrence_bools(self.segs[0])[: self.n]) + 1
        if len(self.segs[0]) == 0:
            occ = occ[occ <= self.n]
        self._emit_ap_list(occ, lambda a, step, cnt: self.emit(a, step, 0, 0, cnt))

    @staticmethod
    def _ap_blocks(vals: np.ndarray):
        """Split a sorted array into maximal arithmetic blocks."""
        out = []
        m = len(vals)
        k = 0
        while k < m:
            if k + 1 == m:
                out.append((int(vals[k]), 0, 1))
                break
            step = int(vals[k + 1] - vals[k])
            e = k + 1
            while e + 1 < m and vals[e + 1] - vals[e] == step:
                e += 1
            out.append((int(vals[k]), step, e - k + 1))
            k = e + 1
        return out

    def _emit_ap_list(self, vals, fn):
        for a, step, cnt in self._ap_blocks(np.asarray(vals)):
            fn(a, step, cnt)

    # r = 2: s1 x s2 ----------------------------------------------------------
    def _two_segment(self):
        n = self.n
        s1, s2 = self.sl
        D1 = np.flatnonzero(self.D[0]).astype(np.int64)  # starts of s1
        D2 = np.flatnonzero(self.D[1]).astype(np.int64)
        D1 = D1[D1 <= min(n, n + 1 - s1 - s2)]
        blocks = self._ap_blocks(D2)
        if not blocks or not len(D1):
            return
        ba = np.array([x[0] for x in blocks], dtype=np.int64)
        bs = np.array([x[1] for x in blocks], dtype=np.int64)
        bc = np.array([x[2] for x in blocks], dtype=np.int64)
        blast = ba + bs * (bc - 1)
        P1 = D1 + s1
        lo = P1 + self.cfg.min_sub_len  # smallest allowed start of s2
        # first block with some member >= lo (blocks are sorted and disjoint)
        k0 = np.searchsorted(blast, lo, side="left")
        cnt = len(blocks) - k0
        src = np.repeat(np.arange(len(D1)), cnt)
        kb = np.repeat(k0, cnt) + _ranges(cnt)
        a_, st, c_ = ba[kb], bs[kb], bc[kb]
        low = lo[src]
        skip = np.where(a_ >= low, 0, -(-(low - a_) // np.maximum(st, 1)))
        first = a_ + skip * st
        count = c_ - skip
        rows = np.stack([D1[src], np.zeros(len(src), np.int64), first - P1[src],
                         np.where(count > 1, st, 0), count], axis=1)
        rows[rows[:, 4] == 1, 1] = 0
        self.fam_arrays.append(rows)

    def _max_beta(self) -> int:
        return (self.n - self.cum[self.r]) // (self.r - 1)

    def _small_sweep(self):
        n = self.n
        s0 = self.sl[0]
        starts = np.flatnonzero(self.D[0][1:n + 1]) + 1  # positions of s1
        top = min(self.B, self._max_beta())
        betas = np.arange(self.cfg.min_sub_len, top + 1, dtype=np.int64)
        if not len(betas) or not len(starts):
            return
        # several lengths per verify call, bounded batch size
        per = max(1, (1 << 20) // len(starts))
        for c in range(0, len(betas), per):
            chunk = betas[c:c + per]
            P1 = np.tile(starts + s0, len(chunk))
            b = np.repeat(chunk, len(starts))
            ok = self.verify(P1, b)
            if ok.any():
                self.emit_pairs(P1[ok], b[ok])

    # ---------------------------------------------------------------------
    # runs: w1 inside a run with period d and 3d <= beta

    def _roots(self, k: int) -> tuple[int, int]:
        return self.rix.roots(k)

    def _mirror(self, k: int):
        """C with t[a+m] = t[b-m] inside run k iff a + b = C (mod d)."""
        ell, ell0 = self._roots(k)
        d = int(self.rix.periods[k])
        if self.idx.rev_match_len(ell, ell0) >= d:
            return (ell + ell0) % d
        return None

    def _block_cons(self, k, za, zb, c0, c1, d):
        """Congruences on beta for substitutions za..zb inside run k when the
        start of w_za is c0 + c1*beta.  Returns None if infeasible."""
        cons = []
        C = None
        for z in range(za, zb):
            if self.dirs[z - 1] is self.dirs[z]:
                cons.append((1, -self.sl[z]))  # |s_{z+1}|
            else:
                if C is None:
                    C = self._mirror(k)
                    if C is None:
                        return None
                a = 2 * c1 + 2 * (z - za) + 2
                b = C - 2 * c0 - self.S(za + 1, z) - self.S(za + 1, z + 1) + 1
                cons.append((a, b))
        return cons

    def _run_route(self):
        rix = self.rix
        lo_beta = max(self.B + 1, self.cfg.min_sub_len)
        lengths = rix.ends - rix.starts + 1
        need = np.maximum(3 * rix.periods, lo_beta)
        cand = np.flatnonzero(lengths >= need)
        for k in cand.tolist():
            self._one_run(int(k), lo_beta)

    def _one_run(self, k, lo_beta):
        rix = self.rix
        i1, j1, d = int(rix.starts[k]), int(rix.ends[k]), int(rix.periods[k])
        blow = max(3 * d, lo_beta)
        self._in_run(k, i1, j1, d, blow)
        r = self.r
        for z in range(1, r - 1):
            self._separated(k, i1, j1, d, blow, z)

    def _left_boundary_cs(self, A, step, i1, d, suf, cmin, cmax):
        """Members c (P1 = A - step*c) whose s1 sticks out to the left of
        the run: P1 in [i1, i1+d) or P1 = i1 + suf."""
        out = set()
        if cmin > cmax:
            return out
        clo = -(-(A - (i1 + d - 1)) // step)
        chi = (A - i1) // step
        for c in range(max(clo, cmin), min(chi, cmax) + 1):
            out.add(c)
        if (A - i1 - suf) % step == 0:
            c = (A - i1 - suf) // step
            if cmin <= c <= cmax:
                out.add(c)
        return out

    def _in_run(self, k, i1, j1, d, blow):
        """All substitutions inside one run: families with fixed end."""
        r = self.r
        s1 = self.sl[0]
        Smid = self.S(2, r - 1)
        step = (r - 1) * d
        suf = _suff_period(self.segs[0], d)
        # E = end of w_{r-1}; P1 = E - Smid + 1 - (r-1)*beta
        e_lo = i1 + (r - 1) * blow + Smid - 1
        if e_lo > j1:
            return
        Es = np.arange(e_lo, j1 + 1, dtype=np.int64)
        Es = Es[self._dget(r, Es + 1)]
        if not len(Es):
            return
        reps_P, reps_b, reps_meta = [], [], []
        bnd_P, bnd_b = [], []
        cons_cache = {}
        for E in Es.tolist():
            c0e = E - Smid + 1
            key = c0e % d
            sols = cons_cache.get(key, 0)
            if sols == 0:
                cons = self._block_cons(k, 1, r - 1, c0e, -(r - 1), d)
                sols = None if cons is None else _combine(cons, d)
                if cons is None:
                    sols = []
                elif sols is None:
                    sols = list(range(d))
                cons_cache[key] = sols
            for delta in sols:
                cmin = max(0, -(-(blow - delta) // d))
                A = c0e - (r - 1) * delta  # P1 at c = 0
                cmax = (A - i1) // step
                if cmin > cmax:
                    continue
                cint = (A - s1 - i1) // step
                if cint >= cmin:
                    reps_P.append(A - step * cmin)
                    reps_b.append(delta + d * cmin)
                    reps_meta.append(min(cint, cmax) - cmin + 1)
                for c in self._left_boundary_cs(A, step, i1, d, suf, max(cmin, cint + 1), cmax):
                    bnd_P.append(A - step * c)
                    bnd_b.append(delta + d * c)
        self._flush_families(reps_P, reps_b, reps_meta, -step, d)
        self._flush_single(bnd_P, bnd_b)

    def _flush_families(self, P, b, counts, start_step, len_step):
        if not P:
            return
        P = np.array(P, dtype=np.int64)
        b = np.array(b, dtype=np.int64)
        ok = self.verify(P, b)
        s0 = self.sl[0]
        for a, bb, c in zip(P[ok].tolist(), b[ok].tolist(), np.array(counts)[ok].tolist()):
            self.emit(a - s0, start_step, bb, len_step, c)

    def _flush_single(self, P, b):
        if not P:
            return
        P = np.array(P, dtype=np.int64)
        b = np.array(b, dtype=np.int64)
        ok = self.verify(P, b)
        if ok.any():
            self.emit_pairs(P[ok], b[ok])

    def _cross_cons(self, k1, k2, g2, zc, a0, a1, d):
        """Congruence tying w1 (start a0 + a1*beta, in run k1) to the
        substitution x_zc starting at g2 in run k2; None if impossible."""
        l1, l01 = self._roots(k1)
        l2, _ = self._roots(k2)
        if self.dirs[zc - 1] is FWD:
            if self.idx.lcp(l1, l2) < d:
                return None
            return (a1, g2 - l2 + l1 - a0)
        if self.idx.rev_match_len(l2, l01) < d:
            return None
        return (a1 + 1, l01 + l2 - g2 - a0 + 1)

    def _separated(self, k, i1, j1, d, blow, z):
        """Instances whose substitutions w1..wz sit in run k and w_{z+1}
        starts a different run with period d."""
        rix = self.rix
        r = self.r
        s_next = self.segs[z]  # s_{z+1}
        pref = _pref_period(s_next, d)
        hs = sorted(break_windows(j1, d, len(s_next), pref))
        Sl = self.S(2, z)
        s1, sr = self.sl[0], self.sl[r - 1]
        suf1 = _suff_period(self.segs[0], d)
        prer = _pref_period(self.segs[r - 1], d)
        reps_P, reps_b, reps_c = [], [], []
        singles_P, singles_b = [], []
        stepL = z * d
        nright = r - 1 - z
        stepR = nright * d
        for h in hs:
            if h - 1 > j1 or h - 1 < i1:
                continue
            g2 = h + len(s_next)
            if g2 + 2 * d - 1 > self.n:
                continue
            k2 = rix.run_with_period_containing(d, g2, g2 + 2 * d - 1)
            if k2 < 0 or k2 == k:
                continue
            i2, j2 = int(rix.starts[k2]), int(rix.ends[k2])
            a0, a1 = h - Sl, -z  # P1 = a0 + a1*beta
            cons = self._block_cons(k, 1, z, a0, a1, d)
            if cons is None:
                continue
            cc = self._cross_cons(k, k2, g2, z + 1, a0, a1, d)
            if cc is None:
                continue
            cons.append(cc)
            # the right block, first checking how far it can stay in run k2
            right_cons = self._block_cons(k2, z + 1, r - 1, g2, 0, d)
            deltas_all = _combine(cons + (right_cons or []), d) if right_cons is not None else None
            if right_cons is not None:
                deltas = deltas_all
                if deltas is None:
                    deltas = list(range(d))
                for delta in deltas:
                    cmin = max(0, -(-(blow - delta) // d))
                    A = a0 + a1 * delta
                    E0 = g2 + nright * delta + self.S(z + 2, r - 1) - 1
                    cL = (A - i1) // stepL
                    cR = (j2 - E0) // stepR
                    cmax = min(cL, cR)
                    if cmin > cmax:
                        continue
                    cint = min((A - s1 - i1) // stepL, (j2 - E0 - sr) // stepR, cmax)
                    if cint >= cmin:
                        reps_P.append(A - stepL * cmin)
                        reps_b.append(delta + d * cmin)
                        reps_c.append(cint - cmin + 1)
                    lo_c = max(cmin, cint + 1)
                    cs = self._left_boundary_cs(A, stepL, i1, d, suf1, lo_c, cmax)
                    # right side: E in (j2-d, j2] or E = j2 - prer
                    for target_lo, target_hi in ((j2 - d + 1, j2), (j2 - prer, j2 - prer)):
                        c_a = -(-(target_lo - E0) // stepR)
                        c_b = (target_hi - E0) // stepR
                        for c in range(max(c_a, lo_c), min(c_b, cmax) + 1):
                            cs.add(c)
                    for c in cs:
                        singles_P.append(A - stepL * c)
                        singles_b.append(delta + d * c)
            # three or more runs: a second separator fixes beta outright
            for z2 in range(z + 1, r - 1):
                self._second_sep(k, k2, i1, j1, i2, j2, d, blow, z, z2, h, g2, cons)
        self._flush_families(reps_P, reps_b, reps_c, -stepL, d)
        self._flush_single(singles_P, singles_b)

    def _second_sep(self, k, k2, i1, j1, i2, j2, d, blow, z, z2, h, g2, left_cons):
        s_nn = self.segs[z2]  # s_{z2+1}
        pref = _pref_period(s_nn, d)
        Sm = self.S(z + 2, z2)
        span = z2 - z
        cons = list(left_cons)
        rc = self._block_cons(k2, z + 1, z2, g2, 0, d)
        if rc is None:
            return
        cons += rc
        deltas = _combine(cons, d)
        if deltas == []:
            return
        cands = set()
        wins = [(j2 + 2 - d, j2 + 1), (j2 - len(s_nn) - d + 1, j2 - len(s_nn))]
        if deltas is None:
            for lo, hi in wins:
                cands.update(range(lo, hi + 1))
        else:
            for delta in deltas:
                res = (g2 + Sm + span * delta) % d
                for lo, hi in wins:
                    cands.add(lo + ((res - lo) % d))
        cands.add(j2 - pref + 1)
        Ps, bs = [], []
        for h2 in cands:
            num = h2 - g2 - Sm
            if num % span:
                continue
            beta = num // span
            if beta < blow:
                continue
            P1 = h - self.S(2, z) - z * beta
            if P1 < i1:
                continue
            if g2 < i2 or h2 - 1 > j2:
                continue
            # w_{z2+1} must leave run k2
            nxt_end = h2 + len(s_nn) + beta - 1
            if nxt_end <= j2:
                continue
            Ps.append(P1)
            bs.append(beta)
        self._flush_single(Ps, bs)

    # ---------------------------------------------------------------------
    # anchors: every remaining instance with beta > B

    def _anchor_route(self):
        first = max(self.B + 1, self.cfg.min_sub_len)
        buckets = bucket_grid(first, self.n)
        self.max_repeat = int(self.idx.lcp_arr.max()) if self.idx.N > 1 else 0
        r = self.r
        if self.dirs[1] is FWD:
            self.mode = "F2"
        elif r >= 4 and self.dirs[2] is FWD:
            self.mode = "F3"
        elif r >= 4:
            self.mode = "RR"
        else:
            self.mode = "PAL"
        threads = max(1, int(self.cfg.threads))
        if threads > 1 and len(buckets) > 1:
            # index structures are built up front so workers only read
            _ = self.D, self.rix
            subs = [_Matcher.__new__(_Matcher) for _ in buckets]
            for sm in subs:
                sm.__dict__.update(self.__dict__)
                sm.fam = []
                sm.fam_arrays = []
                sm._root_cache = {}
            with ThreadPoolExecutor(threads) as ex:
                list(ex.map(lambda a: a[0]._bucket(*a[1]), zip(subs, buckets)))
            for sm in subs:
                self.fam.extend(sm.fam)
                self.fam_arrays.extend(sm.fam_arrays)
        else:
            for b in buckets:
                self._bucket(*b)

    def _bucket(self, L, g, lo, hi):
        n = self.n
        if L > self.max_repeat:
            # no length-L string occurs twice (in either direction), so no
            # anchor has a copy to pin beta
            return
        qs = np.arange(1, n - L + 2, g, dtype=np.int64)
        if not len(qs):
            return
        if L >= 2:
            rid = self.rix.substring_run_ids(qs, qs + L - 1)
        else:
            rid = np.full(len(qs), -1, dtype=np.int64)
        npq = qs[rid < 0]
        if len(npq):
            self._nonperiodic_anchors(npq, L, g, lo, hi)
        per = np.flatnonzero(rid >= 0)
        if len(per):
            self._periodic_anchors(qs[per], rid[per], L, g, lo, hi)

    # occurrence search helpers ---------------------------------------------
    def _class_table(self, L):
        idx = self.idx
        cs = idx.slot_classes(L)
        n = self.n
        m = n - L + 1
        rk = idx.rank[:m]
        lcpa = idx.lcp_arr
        # singleton classes never yield a copy: keep windows whose suffix
        # shares L symbols with a neighbour slot
        dup = lcpa[rk] >= L
        dup |= (rk > 0) & (lcpa[np.maximum(rk - 1, 0)] >= L)
        pos = np.flatnonzero(dup) + 1
        keys = np.sort(cs[rk[pos - 1]] * (n + 2) + pos)
        return cs, keys

    def _occ_window(self, keys, c, x, y, n):
        """Vectorized: all positions of class c in [x, y] -> (query index, pos)."""
        base = c * (n + 2)
        lo = base + np.maximum(x, 1)
        hi = base + y
        st = np.searchsorted(keys, lo, side="left")
        qi_all, pos_all = [], []
        live = np.flatnonzero(x <= y)
        kk = 0
        while len(live):
            at = st[live] + kk
            ok = at < len(keys)
            live, at = live[ok], at[ok]
            if not len(live):
                break
            v = keys[at]
            ok = v <= hi[live]
            live, v = live[ok], v[ok]
            if not len(live):
                break
            qi_all.append(live)
            pos_all.append(v - c[live] * (n + 2))
            kk += 1
        if not qi_all:
            return np.zeros(0, np.int64), np.zeros(0, np.int64)
        return np.concatenate(qi_all), np.concatenate(pos_all)

    def _nonperiodic_anchors(self, qs, L, g, lo, hi):
        n = self.n
        cs, keys = self._class_table(L)
        a = qs
        b = qs + L - 1
        ul = np.full(len(qs), L, dtype=np.int64)
        rank = self.idx.rank
        cf = cs[rank[a - 1]]
        cr = cs[rank[self.idx.rev_end(b)]]

        def fwd_occ(sel, x, y):
            return self._occ_window(keys, cf[sel], x, y, n)

        def rev_occ(sel, x, y):
            return self._occ_window(keys, cr[sel], x, y, n)

        self._copies(qs, a, b, ul, g, lo, hi, fwd_occ, rev_occ, None)

    def _copies(self, qs, a, b, ul, g, lo, hi, fwd_occ, rev_occ, owner):
        """Copy search for anchor strings u = t[a..b] (arrays, one per anchor
        q) and candidate expansion.  `owner` filters candidates by route."""
        s = self.sl
        Plo = qs - g + 1
        Phi = np.minimum(qs, a)
        allidx = np.arange(len(qs))
        mode = self.mode
        if mode == "F2":
            x = a + s[1] + lo
            y = a + s[1] + hi
            qi, q2 = fwd_occ(allidx, x, y)
            beta = q2 - a[qi] - s[1]
            self._expand(qi, beta, Plo, Phi, b, owner)
        elif mode == "F3":
            off = s[1] + s[2]
            x = a + off + 2 * lo
            y = a + off + 2 * hi
            qi, q3 = fwd_occ(allidx, x, y)
            num = q3 - a[qi] - off
            ev = num % 2 == 0
            self._expand(qi[ev], num[ev] // 2, Plo, Phi, b, owner)
        else:
            x = 2 * Plo + 2 * lo + s[1] - a - ul
            y = 2 * Phi + 2 * hi + s[1] - a - ul
            qi, q2 = rev_occ(allidx, x, y)
            if mode == "RR":
                x3 = q2 + s[2] + lo
                y3 = q2 + s[2] + hi
                qj, q3 = rev_occ(qi, x3, y3)
                src = qi[qj]
                q2b = q2[qj]
                beta = q3 - q2b - s[2]
                num = q2b - 2 * beta - s[1] + a[src] + ul[src]
                ev = num % 2 == 0
                src, beta, P1 = src[ev], beta[ev], num[ev] // 2
                keep = (P1 >= Plo[src]) & (P1 <= Phi[src]) & (P1 + beta - 1 >= b[src])
                self._finish(src[keep], P1[keep], beta[keep], owner)
            else:
                num = q2 - s[1] + a[qi] + ul[qi]
                ev = num % 2 == 0
                qi, m = qi[ev], num[ev] // 2
                keep = m - 1 >= b[qi]
                qi, m = qi[keep], m[keep]
                # beta ranges with P1 = m - beta in [Plo, Phi]
                blo = np.maximum(lo, m - Phi[qi])
                bhi = np.minimum(hi, m - Plo[qi])
                cnt = np.maximum(bhi - blo + 1, 0)
                if cnt.sum() == 0:
                    return
                src = np.repeat(qi, cnt)
                beta = np.repeat(blo, cnt) + _ranges(cnt)
                P1 = np.repeat(m, cnt) - beta
                self._finish(src, P1, beta, owner)

    def _expand(self, qi, beta, Plo, Phi, b, owner):
        if not len(qi):
            return
        lo_p = np.maximum(Plo[qi], b[qi] - beta + 1)
        hi_p = Phi[qi]
        cnt = np.maximum(hi_p - lo_p + 1, 0)
        if cnt.sum() == 0:
            return
        src = np.repeat(qi, cnt)
        P1 = np.repeat(lo_p, cnt) + _ranges(cnt)
        bb = np.repeat(beta, cnt)
        self._finish(src, P1, bb, owner)

    def _finish(self, src, P1, beta, owner):
        if not len(P1):
            return
        ok = self.verify(P1, beta)
        src, P1, beta = src[ok], P1[ok], beta[ok]
        if not len(P1):
            return
        if owner is not None:
            keep = owner(src, P1, beta)
            src, P1, beta = src[keep], P1[keep], beta[keep]
        # drop instances owned by the run route
        rid = self.rix.substring_run_ids(P1, P1 + beta - 1)
        typ1 = np.zeros(len(P1), dtype=bool)
        has = rid >= 0
        typ1[has] = 3 * self.rix.periods[rid[has]] <= beta[has]
        keep = ~typ1
        if keep.any():
            self.emit_pairs(P1[keep], beta[keep])

    def _periodic_anchors(self, qs, rids, L, g, lo, hi):
        """Anchors lying in a run: use the run's end (or start) to get a
        non-periodic anchor string."""
        rix = self.rix
        n = self.n
        I = rix.starts[rids]
        J = rix.ends[rids]
        Dd = rix.periods[rids]
        # right extension v' = t[q..j'+1]
        sel = np.flatnonzero(J + 1 <= n)
        if len(sel):
            self._periodic_side(qs[sel], qs[sel], J[sel] + 1, Dd[sel], I[sel], J[sel], g, lo, hi, "right")
        sel = np.flatnonzero(I >= 2)
        if len(sel):
            self._periodic_side(qs[sel], I[sel] - 1, qs[sel] + L - 1, Dd[sel], I[sel], J[sel], g, lo, hi, "left")

    def _periodic_side(self, qs, a, b, d, I, J, g, lo, hi, side):
        rix, idx = self.rix, self.idx
        ul = b - a + 1

        def lookup(sel, x, y, reverse):
            qi_out, pos_out = [], []
            for loc, (k, xx, yy) in enumerate(zip(sel.tolist(), x.tolist(), y.tolist())):
                if xx > yy:
                    continue
                dd = int(d[k])
                u = int(ul[k])
                # where the periodic part of the copy must start or end
                by_end = (side == "right") != reverse
                if by_end:
                    ids = rix.runs_with_period_ending_in(dd, xx + u - 2, yy + u - 2)
                    cands = [int(rix.ends[j]) - u + 2 for j in ids]
                else:
                    ids = rix.runs_with_period_starting_in(dd, xx + 1, yy + 1)
                    cands = [int(rix.starts[j]) - 1 for j in ids]
                for q2 in cands:
                    if q2 < 1 or q2 + u - 1 > self.n:
                        continue
                    if reverse:
                        good = idx.rev_match_len(q2, int(b[k])) >= u
                    else:
                        good = idx.lcp(int(a[k]), q2) >= u
                    if good:
                        qi_out.append(loc)
                        pos_out.append(q2)
            return np.array(qi_out, dtype=np.int64), np.array(pos_out, dtype=np.int64)

        def owner(src, P1, beta):
            if side == "right":
                return np.ones(len(P1), dtype=bool)
            # the right extension owns instances whose w1 passes the run end
            return P1 + beta - 1 <= J[src]

        self._copies(qs, a, b, ul, g, lo, hi,
                     lambda s_, x, y: lookup(s_, x, y, False),
                     lambda s_, x, y: lookup(s_, x, y, True), owner)


def _ranges(cnt: np.ndarray) -> np.ndarray:
    """Concatenation of arange(c) for each c in cnt."""
    total = int(cnt.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    ends = np.cumsum(cnt)
    starts = np.repeat(ends - cnt, cnt)
    return np.arange(total, dtype=np.int64) - starts


# ---------------------------------------------------------------------------


def _finalize(rows: np.ndarray, n, p, cfg) -> MatchReport:
    if len(rows):
        order = np.lexsort((rows[:, 4], rows[:, 3], rows[:, 1], rows[:, 2], rows[:, 0]))
        rows = rows[order]
    return MatchReport(np.ascontiguousarray(rows), n, p, cfg)


def find_all(t: bytes, p: Pattern | str | bytes, config: MatchConfig | None = None,
             *, index: TextIndex | None = None) -> MatchReport:
    cfg = config or MatchConfig()
    if not isinstance(p, Pattern):
        p = parse_pattern(p)
    t = bytes(t)
    if len(t) == 0:
        raise ValueError("empty text")
    m = _Matcher(t, p, cfg, idx=index)
    raw = m.run()
    return _finalize(raw, len(t), p, cfg)


def enumerate_arrays(report: MatchReport) -> tuple[np.ndarray, np.ndarray]:
    """(starts, sub_lens) of every instance, sorted by (start, sub_len)."""
    arr = report.rows
    if not len(arr):
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    cnt = arr[:, 4]
    k = _ranges(cnt)
    starts = np.repeat(arr[:, 0], cnt) + k * np.repeat(arr[:, 1], cnt)
    subs = np.repeat(arr[:, 2], cnt) + k * np.repeat(arr[:, 3], cnt)
    # single key sort: start-major, sub_len < n+1
    order = np.argsort(starts * (report.n + 1) + subs, kind="stable")
    return starts[order], subs[order]


def enumerate_instances(report: MatchReport) -> Iterator[Instance]:
    """Yield instances sorted by (start, sub_len)."""
    starts, subs = enumerate_arrays(report)
    for s, b in zip(starts.tolist(), subs.tolist()):
        yield Instance(s, b)


def verify_instance(idx: TextIndex, p: Pattern, start: int, sub_len: int) -> bool:
    m = _Matcher(idx.text, p, MatchConfig(min_sub_len=0), idx=idx)
    p = m.p
    if p.r == 1:
        return sub_len == 0 and 1 <= start <= idx.n and idx.text.startswith(p.segments[0], start - 1)
    return m.verify_one(start + len(p.segments[0]), sub_len)
