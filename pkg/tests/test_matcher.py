import random

import numpy as np
import pytest
from conftest import EXAMPLE_TEXT

from onevar.cli import random_case
from onevar.matcher import (InstanceFamily, MatchConfig, MatchReport, enumerate_instances,
                            find_all, verify_instance)
from onevar.oracle import naive_find
from onevar.pattern import Instance, parse_pattern
from onevar.text_index import build_index


def inst(t, ps, **kw):
    return [(i.start, i.sub_len) for i in enumerate_instances(find_all(t, ps, MatchConfig(**kw)))]


def oracle(t, ps, msl=1):
    return [(i.start, i.sub_len) for i in naive_find(t, parse_pattern(ps), msl)]


def test_example_text():
    assert inst(EXAMPLE_TEXT, "a{x}ab{x}bc{~x}") == [(1, 3), (14, 6)]


def test_small_examples():
    assert inst(b"abba", "{x}{~x}") == [(1, 2), (2, 1)]
    assert inst(b"aa", "{x}{x}") == [(1, 1)]


def test_empty_text_rejected():
    with pytest.raises(ValueError):
        find_all(b"", "{x}")


def test_enumerate_expands_families():
    p = parse_pattern("{x}{x}")
    rows = np.array([[13, -3, 3, 3, 4]], dtype=np.int64)
    rep = MatchReport(rows, 30, p)
    got = list(enumerate_instances(rep))
    assert got == [Instance(4, 12), Instance(7, 9), Instance(10, 6), Instance(13, 3)]
    assert rep.total == 4
    assert list(enumerate_instances(MatchReport(np.zeros((0, 5), np.int64), 5, p))) == []


def test_family_members():
    f = InstanceFamily(10, -2, 3, 1, 3)
    assert list(f.members()) == [(10, 3), (8, 4), (6, 5)]


def test_verify_instance():
    idx = build_index(EXAMPLE_TEXT)
    p = parse_pattern("a{x}ab{x}bc{~x}")
    assert verify_instance(idx, p, 1, 3)
    assert verify_instance(idx, p, 14, 6)
    assert not verify_instance(idx, p, 1, 30)
    assert not verify_instance(idx, p, 2, 3)


def test_verify_instance_against_oracle():
    rng = random.Random(9)
    for _ in range(200):
        t, ps, _ = random_case(rng, 40)
        p = parse_pattern(ps)
        idx = build_index(t)
        good = {(i.start, i.sub_len) for i in naive_find(t, p, 0)}
        for s, b in good:
            assert verify_instance(idx, p, s, b)
        for _ in range(10):
            s, b = rng.randint(1, len(t)), rng.randint(0, len(t))
            assert verify_instance(idx, p, s, b) == ((s, b) in good)


@pytest.mark.parametrize("seed", range(4))
def test_random_differential(seed):
    rng = random.Random(100 + seed)
    for _ in range(250):
        t, ps, msl = random_case(rng, 200)
        rep = find_all(t, ps, MatchConfig(min_sub_len=msl))
        got = [(i.start, i.sub_len) for i in enumerate_instances(rep)]
        assert got == oracle(t, ps, msl), (t, ps, msl)
        assert len(got) == rep.total


@pytest.mark.parametrize("cutoff", [0, 1, 3, 7])
def test_cutoff_does_not_change_results(cutoff):
    rng = random.Random(cutoff)
    for _ in range(150):
        t, ps, msl = random_case(rng, 150)
        got = inst(t, ps, min_sub_len=msl, small_cutoff=cutoff)
        assert got == oracle(t, ps, msl), (t, ps, msl, cutoff)


def test_in_run_families_keep_the_end_fixed():
    t = b"ab" * 40
    rep = find_all(t, "{x}{x}{x}")
    steps = {(f.start_step, f.len_step) for f in rep.families if f.count > 1}
    # three substitutions of period-2 strings: start moves by -3*2
    assert steps == {(-6, 2)}
    assert sorted(rep.instance_set()) == oracle(t, "{x}{x}{x}")


def test_threads_give_identical_rows():
    t = (b"abcab" * 300)[:1200] + b"cab" * 100
    a = find_all(t, "{x}c{~x}ab{x}", MatchConfig(threads=1)).rows
    b = find_all(t, "{x}c{~x}ab{x}", MatchConfig(threads=4)).rows
    assert np.array_equal(a, b)


def test_min_sub_len_two_drops_short_members():
    t = b"aaaaaaa"
    assert inst(t, "{x}{x}", min_sub_len=2) == [x for x in oracle(t, "{x}{x}", 0) if x[1] >= 2]
