"""Instances whose substitutions sit inside runs of a fixed period d.

Covers the candidate positions where a d-periodic block can break, the
separation pairs of a pattern, and per-segment reports for instances whose
substitutions lie in one run or are split between two runs.

Segment reports fix ``h``, the start of the segment right after a block of
substitutions, and describe all lengths ``beta = base + c*d`` at once:

* ``E[h] = 1`` says every ``c`` in ``0..level(h)`` gives an instance whose
  outer segments are inside the runs too (these are closed under ``c``);
* ``F[h] = 1`` says the single member at ``c = flevel(h)``, the largest one
  whose substitutions stay inside the runs, is an instance;
* ``extras`` lists the remaining boundary instances explicitly.

``level`` and ``flevel`` are step functions of ``h`` with at most two steps
in one run and three across two runs; ``cuts`` hold the last ``h`` of each
step but the final one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .bitvec import BitArray
from .context import InstanceFamily, MatchContext, _pref_period, _suff_period
from .pattern import FWD, Pattern, parse_pattern
from .runs import Run

CLASSES = ("Z", "Z'", "Z''")


def break_windows(j: int, d: int, s_len: int, pref_len: int) -> set[int]:
    """Possible starts of the segment that follows a d-periodic substitution
    ending inside a run that ends at j."""
    out = {j - pref_len + 1}
    out.update(range(j + 2 - d, j + 2))
    out.update(range(j - s_len - d + 1, j - s_len + 1))
    return out


def break_candidates(run: Run, s_len: int, pref_len: int) -> set[int]:
    return break_windows(run.end, run.period, s_len, pref_len)


# ---------------------------------------------------------------------------
# separations


def _as_pattern(p) -> Pattern:
    return p if isinstance(p, Pattern) else parse_pattern(p)


def _has_period(s: bytes, d: int) -> bool:
    return all(s[k] == s[k - d] for k in range(d, len(s)))


def class_members(p, name: str) -> list[int]:
    """Indices z in 2..r-1 by the directions of the neighbours x_{z-1}, x_z."""
    p = _as_pattern(p)
    dirs = p.directions
    out = []
    for z in range(2, p.r):
        a, b = dirs[z - 2], dirs[z - 1]
        if name == "Z" and a is b:
            out.append(z)
        elif name == "Z'" and a is FWD and b is not FWD:
            out.append(z)
        elif name == "Z''" and a is not FWD and b is FWD:
            out.append(z)
    return out


def propwsw(p, z1: int, z2: int, d: int, cls: str | None = None) -> bool:
    p = _as_pattern(p)
    a, b = p.segments[z1 - 1], p.segments[z2 - 1]
    if (len(a) - len(b)) % d:
        return False
    if not (_has_period(a, d) and _has_period(b, d)):
        return False
    if p.directions[z1 - 1] is not p.directions[z2 - 1]:
        b = b[::-1]
    return a.startswith(b) or b.startswith(a)


def _eq2(p, members, z, d) -> bool:
    sl = [len(s) for s in p.segments]
    below = [m for m in members if m < z]
    if not all(propwsw(p, a, b, d) for a, b in combinations(below, 2)):
        return False
    return all(not propwsw(p, m, z, d) or sl[m - 1] < d <= sl[z - 1] for m in below)


def separation_candidates(p, members, d: int) -> list[int]:
    """The few members of a class that can start a separation."""
    p = _as_pattern(p)
    members = sorted(members)
    if not members:
        return []
    sl = [len(s) for s in p.segments]
    first = members[0]
    cand = {first}
    brk = None
    for k in range(1, len(members)):
        if not all(propwsw(p, members[m], members[k], d) for m in range(k)):
            brk = members[k]
            break
    if brk is not None:
        cand.add(brk)
    head = [m for m in members if brk is None or m < brk]
    big = [m for m in head if sl[m - 1] >= d]
    if big:
        cand.add(big[0])
    elif brk is not None:
        cand.add(brk)
    return sorted(z for z in cand if _eq2(p, members, z, d))


def is_separation(p, members, z: int, z2: int, d: int) -> bool:
    p = _as_pattern(p)
    sl = [len(s) for s in p.segments]
    inner = [m for m in members if m < z or z < m < z2]
    if not all(propwsw(p, a, b, d) for a, b in combinations(inner, 2)):
        return False
    for m in inner:
        for y in {z, z2}:
            if propwsw(p, m, y, d) and not sl[m - 1] < d <= sl[y - 1]:
                return False
    return True


def separations(p, d: int) -> dict[str, list[tuple[int, int]]]:
    p = _as_pattern(p)
    out = {}
    for name in CLASSES:
        members = class_members(p, name)
        pairs = set()
        for z in separation_candidates(p, members, d):
            if is_separation(p, members, z, z, d):
                pairs.add((z, z))
            rest = [m for m in members if m != z]
            for z2 in separation_candidates(p, rest, d):
                if z2 > z and is_separation(p, members, z, z2, d):
                    pairs.add((z, z2))
        out[name] = sorted(pairs)
    return out


def separations_quadratic(p, d: int) -> dict[str, list[tuple[int, int]]]:
    """Every pair z <= z' checked against the definition directly."""
    p = _as_pattern(p)
    out = {}
    for name in CLASSES:
        members = class_members(p, name)
        out[name] = [(a, b) for a in members for b in members
                     if a <= b and is_separation(p, members, a, b, d)]
    return out


# ---------------------------------------------------------------------------
# residues of |w| forced by a run


def w_mod_d(p, d: int) -> set[int]:
    p = _as_pattern(p)
    sl = [len(s) for s in p.segments]
    same = class_members(p, "Z")
    if same:
        vals = {(-sl[z - 1]) % d for z in same}
        return vals if len(vals) == 1 else set()
    z1, z2 = class_members(p, "Z'"), class_members(p, "Z''")
    if not (z1 and z2):
        raise ValueError("pattern has no adjacent pair that fixes |w| mod d")
    tot = sl[z1[0] - 1] + sl[z2[0] - 1]
    return {(v // 2) % d for v in (d - tot, -tot) if v % 2 == 0}


def _ctx(ctx_or_text, p) -> MatchContext:
    if isinstance(ctx_or_text, MatchContext):
        return ctx_or_text
    from .context import build_context
    return build_context(ctx_or_text, p, 0)


def d_subarray(ctx, p, run: Run, b1: int, b2: int, eta: int) -> BitArray:
    """D'[h] for h in [b1..b2]: an instance with |w| = eta ends its last
    substitution at h-1 and its first substitution starts at or after the
    run start."""
    ctx = _ctx(ctx, p)
    d = run.period
    if b2 - b1 + 1 != d:
        raise ValueError("segment width must equal the period")
    if eta < d:
        raise ValueError("need eta >= d")
    if any(x is not FWD for x in ctx.dirs):
        raise ValueError("all substitutions must share a direction")
    r = ctx.r
    if any((eta + ctx.sl[z - 1]) % d for z in range(2, r)):
        return BitArray(d)
    h = np.arange(b1, b2 + 1, dtype=np.int64)
    ok = h - ctx.S(2, r - 1) - (r - 1) * eta >= run.start
    for z in range(1, r + 1):
        pos = h - ctx.S(z, r - 1) - (r - z) * eta
        ok &= ctx._dget(z, pos)
    return BitArray.from_bools(ok)


# ---------------------------------------------------------------------------
# segment reports


@dataclass(frozen=True)
class InRunReport:
    b1: int
    b2: int
    d: int
    base: int          # smallest length, >= 3d, in the residue class
    z: int             # substitutions before h
    offset: int        # start = h - offset - z*beta
    E: BitArray
    F: BitArray
    levels: tuple[int, ...]
    cuts: tuple[int, ...]
    flevels: tuple[int, ...]
    fcuts: tuple[int, ...]
    extras: tuple[tuple[int, int], ...] = field(default=())

    # short names for the plateau levels and cuts
    @property
    def d1(self): return self.levels[0]

    @property
    def d2(self): return self.levels[min(1, len(self.levels) - 1)]

    @property
    def h1(self): return self.cuts[0] if self.cuts else self.b2

    @property
    def a1(self): return self.flevels[0]

    @property
    def a2(self): return self.flevels[min(1, len(self.flevels) - 1)]

    @property
    def h2(self): return self.fcuts[0] if self.fcuts else self.b2

    @staticmethod
    def _at(h, levels, cuts):
        for c, v in zip(cuts, levels):
            if h <= c:
                return v
        return levels[-1]

    def decode(self) -> list[tuple[int, int]]:
        out = set(self.extras)
        for k in self.E.positions():
            h = self.b1 + k - 1
            for c in range(self._at(h, self.levels, self.cuts) + 1):
                beta = self.base + c * self.d
                out.add((h - self.offset - self.z * beta, beta))
        for k in self.F.positions():
            h = self.b1 + k - 1
            beta = self.base + self._at(h, self.flevels, self.fcuts) * self.d
            out.add((h - self.offset - self.z * beta, beta))
        return sorted(out)


def _plateaus(vals: np.ndarray, b1: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    levels = [int(vals[0])]
    cuts = []
    for k in range(1, len(vals)):
        if vals[k] != vals[k - 1]:
            cuts.append(b1 + k - 1)
            levels.append(int(vals[k]))
    return tuple(levels), tuple(cuts)


def _base(delta: int, d: int) -> int:
    return 3 * d + delta % d


def _segment(ctx: MatchContext, z: int, left: Run, right: Run | None,
             delta: int, b1: int, b2: int) -> InRunReport:
    d = left.period
    if b2 - b1 + 1 != d:
        raise ValueError("segment width must equal the period")
    r, sl = ctx.r, ctx.sl
    base = _base(delta, d)
    h = np.arange(b1, b2 + 1, dtype=np.int64)
    mid = ctx.S(2, z)
    i1 = left.start
    # P1 at c = 0, and its slack against the run start
    P0 = h - mid - z * base
    cL = np.floor_divide(P0 - i1, z * d)
    cLi = np.floor_divide(P0 - sl[0] - i1, z * d)
    big = np.full(len(h), 1 << 60, dtype=np.int64)
    inside = h - 1 <= left.end
    if right is None:
        cR = cRi = big
        g2 = None
    else:
        m = r - 1 - z
        g2 = h + sl[z]
        endw0 = g2 + m * base + ctx.S(z + 2, r - 1) - 1
        cR = np.floor_divide(right.end - endw0, m * d)
        cRi = np.floor_divide(right.end - endw0 - sl[r - 1], m * d)
        inside &= g2 >= right.start
    lev = np.minimum(cLi, cRi)
    flev = np.minimum(cL, cR)

    def members(c):
        beta = base + c * d
        return h - mid - z * beta, beta

    P, beta = members(0 * lev)
    E = inside & (lev >= 0) & ctx.verify(P, beta)
    P, beta = members(np.maximum(flev, 0))
    F = inside & (flev >= 0) & ctx.verify(P, beta)
    levels, cuts = _plateaus(lev, b1)
    flevels, fcuts = _plateaus(flev, b1)
    rep = InRunReport(b1, b2, d, base, z, ctx.S(1, z), BitArray.from_bools(E),
                      BitArray.from_bools(F), levels, cuts, flevels, fcuts)
    covered = set(rep.decode())
    # boundary members with an outer segment sticking out of the runs
    extra = set()
    suf = _suff_period(ctx.segs[0], d)
    cand = []
    for k, hh in enumerate(h.tolist()):
        if not inside[k]:
            continue
        num = hh - mid - (i1 + suf)
        if num % z == 0:
            cand.append((hh, num // z))
        if right is not None:
            m = r - 1 - z
            pref = _pref_period(ctx.segs[r - 1], d)
            num = right.end - pref - int(g2[k]) - ctx.S(z + 2, r - 1) + 1
            if num % m == 0:
                cand.append((hh, num // m))
    for hh, b in cand:
        if b < base or (b - base) % d:
            continue
        P1 = hh - mid - z * b
        if P1 < i1:
            continue
        if right is not None:
            endw = hh + sl[z] + (r - 1 - z) * b + ctx.S(z + 2, r - 1) - 1
            if endw > right.end:
                continue
        st = P1 - sl[0]
        if (st, b) not in covered and ctx.verify_one(P1, b):
            extra.add((st, b))
    if extra:
        rep = InRunReport(b1, b2, d, base, z, ctx.S(1, z), rep.E, rep.F, levels,
                          cuts, flevels, fcuts, tuple(sorted(extra)))
    return rep


def in_run_segment(ctx, p, run: Run, delta: int, b1: int, b2: int) -> InRunReport:
    """Instances with all substitutions in ``run``, |w| >= 3d, |w| = delta
    (mod d), and the last segment starting at some h in [b1..b2]."""
    ctx = _ctx(ctx, p)
    if ctx.r < 3:
        raise ValueError("need at least three substitutions")
    if not (run.start <= b1 and b2 <= run.end + 1):
        raise ValueError("segment must lie in [start..end+1] of the run")
    return _segment(ctx, ctx.r - 1, run, None, delta, b1, b2)


def two_run_segment(ctx, p, run1: Run, run2: Run, z: int, delta: int,
                    b1: int, b2: int) -> InRunReport:
    """Instances with w_1..w_z in ``run1`` and w_{z+1}..w_{r-1} in ``run2``,
    |w| >= 3d, |w| = delta (mod d), and s_{z+1} starting in [b1..b2]."""
    ctx = _ctx(ctx, p)
    if run1.period != run2.period:
        raise ValueError("runs must share a period")
    if not 1 <= z <= ctx.r - 2:
        raise ValueError("need 1 <= z <= r-2")
    if not (run1.start <= b1 and b2 <= run1.end + 1):
        raise ValueError("segment must lie in [start..end+1] of the first run")
    return _segment(ctx, z, run1, run2, delta, b1, b2)


def in_run_special_xrev(ctx, p, run: Run, b1: int, b2: int,
                        min_len: int | None = None) -> list[InstanceFamily]:
    """Pattern s1 x s2 ~x s3 (either order) inside one run: families for each
    start h of s2 in [b1..b2], with the substitutions in the run."""
    ctx = _ctx(ctx, p)
    if ctx.r != 3 or ctx.dirs[0] is ctx.dirs[1]:
        raise ValueError("pattern must have shape s1 x s2 ~x s3")
    d = run.period
    i1, j1 = run.start, run.end
    s1, s2, s3 = ctx.sl
    lo_len = 3 * d if min_len is None else min_len
    lo_len = max(lo_len, ctx.cfg.min_sub_len, 1)
    out = []
    for h in range(b1, b2 + 1):
        ymax = min(h - i1, j1 - h - s2 + 1)
        yint = min(ymax, h - i1 - s1, j1 - h - s2 - s3 + 1)
        for y0 in range(lo_len, min(lo_len + d, ymax + 1)):
            cnt = (yint - y0) // d + 1 if yint >= y0 else 0
            if cnt and ctx.verify_one(h - y0, y0):
                out.append(InstanceFamily(h - y0 - s1, -d if cnt > 1 else 0, y0,
                                          d if cnt > 1 else 0, cnt))
            ys = np.arange(y0 + max(cnt, 0) * d, ymax + 1, d, dtype=np.int64)
            if len(ys):
                ok = ctx.verify(h - ys, ys)
                out.extend(InstanceFamily(int(h - y - s1), 0, int(y), 0, 1) for y in ys[ok])
    return sorted(out)


# ---------------------------------------------------------------------------
# three or more runs: the two period breaks fix |w|


def separate_lemma_instances(ctx, p, v: tuple[int, int], d: int, z: int,
                             z2: int) -> list[InstanceFamily]:
    """Instances where w_1 contains v = t[h1..h2] (minimal period d), the
    length lies in (3|v|/2 .. 2|v|], the blocks w_1..w_{z-1} and
    w_z..w_{z2-1} have period d, and the pattern breaks that period at s_z
    and at s_{z2}."""
    ctx = _ctx(ctx, p)
    r, sl = ctx.r, ctx.sl
    if not 1 < z < z2 < r:
        raise ValueError("need 1 < z < z' < r")
    h1, h2 = v
    vl = h2 - h1 + 1
    got = ctx.rix.substring_run(h1, h2)
    if got is None or got[0] != d:
        raise ValueError("v must have minimal period d <= |v|/2")
    run1 = got[1]
    rix = ctx.rix
    found = set()
    gap = ctx.S(z, z2 - 1)
    for h in sorted(break_windows(run1.end, d, sl[z - 1], _pref_period(ctx.segs[z - 1], d))):
        g = h + sl[z - 1]
        if g < 1 or g + 2 * d - 1 > ctx.n:
            continue
        k2 = rix.run_with_period_containing(d, g, g + 2 * d - 1)
        if k2 < 0:
            continue
        j2 = int(rix.ends[k2])
        for hh in break_windows(j2, d, sl[z2 - 1], _pref_period(ctx.segs[z2 - 1], d)):
            num = hh - h - gap
            if num <= 0 or num % (z2 - z):
                continue
            beta = num // (z2 - z)
            if not 3 * vl < 2 * beta <= 4 * vl:
                continue
            P1 = h - (z - 1) * beta - ctx.S(2, z - 1)
            if not (P1 <= h1 and P1 + beta - 1 >= h2):
                continue
            if not ctx.verify_one(P1, beta):
                continue
            if not (ctx.has_period(P1, h - 1, d) and ctx.has_period(g, hh - 1, d)):
                continue
            if ctx.has_period(h - beta, g + beta - 1, d):
                continue
            if ctx.has_period(hh - beta, hh + sl[z2 - 1] + beta - 1, d):
                continue
            found.add((P1 - sl[0], beta))
    return [InstanceFamily(s, 0, b, 0, 1) for s, b in sorted(found)]
