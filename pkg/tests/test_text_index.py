import random

import pytest
from conftest import EXAMPLE_TEXT

from onevar.text_index import build_index, lcp, occurrences, rev_match_len, rlcp


def direct_lcp(a: bytes, b: bytes) -> int:
    k = 0
    while k < min(len(a), len(b)) and a[k] == b[k]:
        k += 1
    return k


def test_build_sizes():
    assert build_index(b"abab").n == 4
    assert build_index(EXAMPLE_TEXT).n == 36
    assert lcp(build_index(b"a"), 1, 1) == 1
    with pytest.raises(ValueError):
        build_index(b"")


def test_lcp_examples():
    idx = build_index(b"abab")
    assert lcp(idx, 1, 3) == 2
    assert lcp(idx, 1, 2) == 0
    assert [lcp(idx, i, i) for i in range(1, 5)] == [4, 3, 2, 1]


def test_rlcp_examples():
    assert rlcp(build_index(b"abab"), 2, 4) == 2
    assert rlcp(build_index(b"abba"), 1, 4) == 1
    assert [rlcp(build_index(b"abab"), i, i) for i in range(1, 5)] == [1, 2, 3, 4]


def test_rev_match_examples():
    assert rev_match_len(build_index(b"abba"), 1, 4) == 4
    assert rev_match_len(build_index(b"abc"), 1, 3) == 0
    # "aXa" read forwards from 1 and backwards from 3 is the same string
    assert rev_match_len(build_index(b"aXa"), 1, 3) == 3


def test_out_of_range():
    idx = build_index(b"abc")
    with pytest.raises(IndexError):
        lcp(idx, 0, 1)
    with pytest.raises(IndexError):
        rev_match_len(idx, 1, 4)


def test_occurrences_examples():
    idx = build_index(b"abab")
    assert occurrences(idx, b"ab").positions() == [1, 3]
    assert occurrences(idx, b"").positions() == [1, 2, 3, 4, 5]
    assert occurrences(idx, b"bb").positions() == []


def test_random_against_direct():
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randint(1, 120)
        t = bytes(rng.choice(b"ab" if rng.random() < .5 else b"abcd") for _ in range(n))
        idx = build_index(t)
        for _ in range(60):
            i, j = rng.randint(1, n), rng.randint(1, n)
            assert lcp(idx, i, j) == direct_lcp(t[i - 1:], t[j - 1:])
            assert rlcp(idx, i, j) == direct_lcp(t[:i][::-1], t[:j][::-1])
            assert rev_match_len(idx, i, j) == direct_lcp(t[i - 1:], t[:j][::-1])
        s = t[rng.randint(0, n - 1):][:rng.randint(0, 20)]
        want = [k + 1 for k in range(n - len(s) + 1) if t.startswith(s, k)]
        if not s:
            want = list(range(1, n + 2))
        assert occurrences(idx, s).positions() == want
