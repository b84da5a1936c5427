import pytest

from onevar.pattern import (FWD, REV, Pattern, PatternSyntaxError, image_length,
                            normalize, parse_pattern, render)


def test_parse_mixed_directions():
    p = parse_pattern("a{x}ab{x}bc{~x}")
    assert p.segments == (b"a", b"ab", b"bc", b"")
    assert p.directions == (FWD, FWD, REV)


def test_parse_variable_free():
    p = parse_pattern("abc")
    assert p.segments == (b"abc",) and p.directions == ()


def test_parse_bare_square():
    p = parse_pattern("{x}{x}")
    assert p.segments == (b"", b"", b"") and p.directions == (FWD, FWD)


@pytest.mark.parametrize("bad", ["{x", "{y}", "a\\", "\\q"])
def test_parse_errors_carry_offset(bad):
    with pytest.raises(PatternSyntaxError):
        parse_pattern(bad)


def test_escapes_round_trip():
    p = parse_pattern("a\\{b\\\\{x}c")
    assert p.segments == (b"a{b\\", b"c")
    assert parse_pattern(render(p)) == p


@pytest.mark.parametrize("segs,dirs,want", [
    ((b"", b""), (REV,), (FWD,)),
    ((b"a", b"b", b""), (REV, FWD), (FWD, REV)),
    ((b"a", b"b"), (FWD,), (FWD,)),
])
def test_normalize_flips_when_first_is_reversed(segs, dirs, want):
    q = normalize(Pattern(segs, dirs))
    assert q.segments == segs and q.directions == want


def test_image_length():
    p = parse_pattern("a{x}ab{x}bc{~x}")
    assert image_length(p, 3) == 14
    assert image_length(p, 6) == 23
    assert image_length(parse_pattern("{x}{x}"), 0) == 0
    with pytest.raises(ValueError):
        image_length(p, -1)
