import ast
from pathlib import Path

from conftest import EXAMPLE_TEXT

import onevar.oracle as oracle
from onevar.oracle import naive_find
from onevar.pattern import parse_pattern


def pairs(t, ps, msl=1):
    return [(i.start, i.sub_len) for i in naive_find(t, parse_pattern(ps), msl)]


def test_example_text():
    assert pairs(EXAMPLE_TEXT, "a{x}ab{x}bc{~x}") == [(1, 3), (14, 6)]


def test_no_square_in_abc():
    assert pairs(b"abc", "{x}{x}") == []


def test_in_run_progression_count():
    # (abc)^10 with five substitutions separated by "c", "cabc", "c", "c":
    # starts 1+3h, lengths 2+3k with h + 5k <= 3
    got = pairs(b"abc" * 10, "{x}c{x}cabc{x}c{x}c{x}ca")
    assert got == [(1, 2), (4, 2), (7, 2), (10, 2)]


def test_zero_length_monotonicity():
    t = b"abaabba"
    for ps in ("{x}{x}", "a{x}{~x}", "{x}b{x}"):
        with0, with1 = pairs(t, ps, 0), pairs(t, ps, 1)
        assert with1 == [x for x in with0 if x[1] > 0]


def test_shares_no_index_code():
    tree = ast.parse(Path(oracle.__file__).read_text())
    mods = {n.module for n in ast.walk(tree) if isinstance(n, ast.ImportFrom)}
    mods |= {a.name for n in ast.walk(tree) if isinstance(n, ast.Import) for a in n.names}
    assert mods <= {"__future__", "pattern"}
