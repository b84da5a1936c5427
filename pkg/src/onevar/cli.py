"""Command line: ``onevar find``, ``onevar bench`` and ``onevar selftest``."""
from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time

import numpy as np

from . import matcher
from .context import MatchConfig
from .oracle import naive_find
from .pattern import Pattern, PatternSyntaxError, parse_pattern

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2
GENERATORS = ("random", "periodic", "fibonacci", "two-block")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# text generators


def fibonacci_word(n: int) -> bytes:
    a, b = b"a", b"ab"
    while len(b) < n:
        a, b = b, b + a
    return b[:n]


def generate(name: str, n: int, seed: int = 0) -> bytes:
    if name == "random":
        rng = np.random.default_rng(seed)
        return rng.choice(np.frombuffer(b"acgt", dtype=np.uint8), size=n).tobytes()
    if name == "periodic":
        return (b"abc" * (n // 3 + 1))[:n]
    if name == "fibonacci":
        return fibonacci_word(n)
    if name == "two-block":
        half = (n - 1) // 2
        return (b"abc" * (half // 3 + 1))[:half] + b"d" + (b"abc" * (n // 3 + 1))[:n - half - 1]
    raise UsageError(f"unknown generator: {name}")


def _sizes(spec: str) -> list[int]:
    """"16384,32768" or "16384:1048576" (doubling)."""
    if ":" in spec:
        lo, hi = (int(x) for x in spec.split(":"))
        out = []
        while lo <= hi:
            out.append(lo)
            lo *= 2
        return out
    return [int(x) for x in spec.split(",") if x]


# ---------------------------------------------------------------------------
# output


def _expanded(report, p: Pattern):
    starts, subs = matcher.enumerate_arrays(report)
    ends = starts + p.terminal_length + (p.r - 1) * subs - 1
    return starts, subs, ends


def _oracle_report(t: bytes, p: Pattern, cfg: MatchConfig):
    got = naive_find(t, p, cfg.min_sub_len)
    rows = np.zeros((len(got), 5), dtype=np.int64)
    if got:
        rows[:, 0] = [i.start for i in got]
        rows[:, 2] = [i.sub_len for i in got]
        rows[:, 4] = 1
    return matcher.MatchReport(rows, len(t), p, cfg)


def write_report(report, p: Pattern, fmt: str, expand: bool, out) -> None:
    if fmt == "json":
        if expand:
            s, b, e = _expanded(report, p)
            obj = {"n": report.n, "total": report.total,
                   "instances": [{"start": x, "sub_len": y, "end": z}
                                 for x, y, z in zip(s.tolist(), b.tolist(), e.tolist())]}
        else:
            obj = report.to_json_obj()
        json.dump(obj, out, separators=(",", ":"))
        out.write("\n")
        return
    if expand:
        s, b, e = _expanded(report, p)
        out.writelines(f"{x}\t{y}\t{z}\n" for x, y, z in zip(s.tolist(), b.tolist(), e.tolist()))
    else:
        out.writelines("\t".join(map(str, r)) + "\n" for r in report.rows.tolist())


# ---------------------------------------------------------------------------
# commands


def cmd_find(args, out) -> int:
    if (args.text is None) == (args.file is None):
        raise UsageError("give exactly one of -t and -f")
    if args.file is not None:
        try:
            with open(args.file, "rb") as fh:
                t = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {args.file}: {e.strerror}")
    else:
        t = args.text.encode("utf-8", errors="surrogateescape")
    if not t:
        raise UsageError("empty text")
    p = parse_pattern(args.pattern)
    cfg = MatchConfig(min_sub_len=args.min_sub_len, threads=args.threads)
    if args.oracle:
        report = _oracle_report(t, p, cfg)
    else:
        report = matcher.find_all(t, p, cfg)
    write_report(report, p, args.format, args.expand, out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    if args.generator not in GENERATORS:
        raise UsageError(f"unknown generator: {args.generator}")
    p = parse_pattern(args.pattern)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["n", "r", "engine", "wall_time", "P"])
    cfg = MatchConfig(threads=args.threads)
    for n in _sizes(args.sizes):
        t = generate(args.generator, n, args.seed)
        engines = [("fast", lambda: matcher.find_all(t, p, cfg).total)]
        if n <= args.naive_max:
            engines.append(("naive", lambda: len(naive_find(t, p, cfg.min_sub_len))))
        for name, fn in engines:
            best, total = None, 0
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                total = fn()
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            w.writerow([n, p.r, name, f"{best:.6f}", total])
    return EXIT_OK


def random_case(rng: random.Random, max_n: int = 300) -> tuple[bytes, str, int]:
    """A random (text, pattern, min_sub_len) triple for differential runs."""
    sigma = rng.randint(1, 4)
    alpha = "abcd"[:sigma]
    n = rng.randint(1, max_n)
    if rng.random() < 0.5:
        root = "".join(rng.choice(alpha) for _ in range(rng.randint(1, 4)))
        t = (root * (n // len(root) + 1))[:n]
        t = "".join(c if rng.random() > 0.03 else rng.choice(alpha) for c in t)
    else:
        t = "".join(rng.choice(alpha) for _ in range(n))
    r = rng.randint(1, 6)
    parts = []
    for k in range(r):
        parts.append("".join(rng.choice(alpha) for _ in range(rng.randint(0, 5) if rng.random() < .4 else rng.randint(0, 1))))
        if k < r - 1:
            parts.append(rng.choice(["{x}", "{~x}"]))
    return t.encode(), "".join(parts), rng.randint(0, 1)


def _mismatch(t: bytes, ps: str, msl: int) -> bool:
    p = parse_pattern(ps)
    rep = matcher.find_all(t, p, MatchConfig(min_sub_len=msl))
    got = rep.instance_set()
    want = {(i.start, i.sub_len) for i in naive_find(t, p, msl)}
    return got != want or len(got) != rep.total


def minimize(t: bytes, ps: str, msl: int) -> bytes:
    """Drop bytes from either end, then single bytes, while the mismatch
    persists."""
    changed = True
    while changed and len(t) > 1:
        changed = False
        for cut in (t[1:], t[:-1], *(t[:k] + t[k + 1:] for k in range(1, len(t) - 1))):
            if cut and _mismatch(cut, ps, msl):
                t, changed = cut, True
                break
    return t


def cmd_selftest(args, out) -> int:
    rng = random.Random(args.seed)
    for k in range(args.cases):
        t, ps, msl = random_case(rng, args.max_n)
        if _mismatch(t, ps, msl):
            small = minimize(t, ps, msl)
            out.write(f"mismatch in case {k}\n")
            out.write(json.dumps({"text": small.decode("latin-1"), "pattern": ps,
                                  "min_sub_len": msl}) + "\n")
            return EXIT_MISMATCH
    out.write(f"ok: {args.cases} cases\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="onevar", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    f = sub.add_parser("find", help="report instances of a pattern")
    f.add_argument("-p", "--pattern", required=True)
    f.add_argument("-t", "--text")
    f.add_argument("-f", "--file")
    f.add_argument("--min-sub-len", type=int, choices=(0, 1), default=1)
    f.add_argument("--format", choices=("json", "tsv"), default="json")
    f.add_argument("--expand", action="store_true")
    f.add_argument("--oracle", action="store_true", help="use the brute-force matcher")
    f.add_argument("--threads", type=int, default=1)
    f.add_argument("--seed", type=int, default=0)

    b = sub.add_parser("bench", help="time the matcher on generated texts")
    b.add_argument("generator")
    b.add_argument("--sizes", default="16384:1048576")
    b.add_argument("-p", "--pattern", default="ac{x}g{~x}ta{x}c")
    b.add_argument("--repeat", type=int, default=1)
    b.add_argument("--naive-max", type=int, default=2000)
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("selftest", help="randomized comparison with the brute-force matcher")
    s.add_argument("--cases", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-n", type=int, default=300)
    s.add_argument("--threads", type=int, default=1)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cmd = {"find": cmd_find, "bench": cmd_bench, "selftest": cmd_selftest}[args.cmd]
        return cmd(args, out)
    except (UsageError, PatternSyntaxError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


__all__ = ["main", "generate", "random_case", "minimize"]
