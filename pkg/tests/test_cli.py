import io
import json
import subprocess
import sys

from conftest import EXAMPLE_TEXT

from onevar import cli, matcher

PAT = "a{x}ab{x}bc{~x}"


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_find_tsv_expanded():
    code, out = run("find", "-p", PAT, "-t", EXAMPLE_TEXT.decode(), "--format", "tsv", "--expand")
    assert code == 0
    assert out == "1\t3\t14\n14\t6\t36\n"


def test_find_json_families_and_expanded():
    code, out = run("find", "-p", PAT, "-t", EXAMPLE_TEXT.decode())
    obj = json.loads(out)
    assert code == 0 and obj["n"] == 36 and obj["total"] == 2
    code, out = run("find", "-p", PAT, "-t", EXAMPLE_TEXT.decode(), "--expand")
    inst = json.loads(out)["instances"]
    assert [(d["start"], d["sub_len"], d["end"]) for d in inst] == [(1, 3, 14), (14, 6, 36)]


def test_find_from_file(tmp_path):
    f = tmp_path / "t.txt"
    f.write_bytes(EXAMPLE_TEXT)
    code, out = run("find", "-p", PAT, "-f", str(f), "--format", "tsv", "--expand")
    assert code == 0 and out.splitlines() == ["1\t3\t14", "14\t6\t36"]


def test_find_min_sub_len_zero():
    code, out = run("find", "-p", "a{x}a", "-t", "aa", "--min-sub-len", "0", "--format", "tsv", "--expand")
    assert code == 0 and out == "1\t0\t2\n"
    code, out = run("find", "-p", "a{x}a", "-t", "aa", "--format", "tsv", "--expand")
    assert out == ""


def test_oracle_flag_agrees_when_expanded():
    text = ("ab" * 30 + "cba" * 10)
    for pat in (PAT, "{x}{x}", "{x}b{~x}a{x}", "ab{~x}{x}"):
        a = run("find", "-p", pat, "-t", text, "--expand", "--format", "tsv")
        b = run("find", "-p", pat, "-t", text, "--expand", "--format", "tsv", "--oracle")
        assert a == b


def test_usage_errors(tmp_path, capsys):
    assert run("find", "-p", PAT, "-t", "")[0] == 1
    assert "empty text" in capsys.readouterr().err
    assert run("find", "-p", PAT, "-f", str(tmp_path / "missing"))[0] == 1
    assert run("find", "-p", PAT)[0] == 1
    assert run("find", "-p", "{y}", "-t", "abc")[0] == 1
    assert run("find", "-p", "a{x", "-t", "abc")[0] == 1
    assert run("bench", "nosuch")[0] == 1
    assert run("nosuch")[0] == 1
    assert run()[0] == 1


def test_bench_rows():
    code, out = run("bench", "periodic", "--sizes", "256,512", "--naive-max", "256")
    rows = out.splitlines()
    assert code == 0 and rows[0] == "n,r,engine,wall_time,P"
    body = [r.split(",") for r in rows[1:]]
    assert [(r[0], r[2]) for r in body] == [("256", "fast"), ("256", "naive"), ("512", "fast")]
    assert body[0][4] == body[1][4]
    assert all(r[1] == "4" for r in body)


def test_bench_generators():
    for name in cli.GENERATORS:
        t = cli.generate(name, 100, seed=3)
        assert len(t) == 100
        assert t == cli.generate(name, 100, seed=3)
    assert cli.generate("fibonacci", 8) == b"abaababa"
    assert b"d" in cli.generate("two-block", 50)
    assert cli._sizes("4:32") == [4, 8, 16, 32]


def test_selftest_passes():
    code, out = run("selftest", "--cases", "150", "--seed", "4")
    assert code == 0 and out == "ok: 150 cases\n"
    assert run("selftest", "--cases", "0") == (0, "ok: 0 cases\n")


def test_selftest_reports_mismatch(monkeypatch):
    real = matcher.find_all

    def broken(t, p, cfg=None):
        rep = real(t, p, cfg)
        return matcher.MatchReport(rep.rows[:0], rep.n, rep.pattern, rep.config) if rep.total else rep

    monkeypatch.setattr(matcher, "find_all", broken)
    code, out = run("selftest", "--cases", "300", "--seed", "1")
    assert code == 2
    lines = out.splitlines()
    assert lines[0].startswith("mismatch in case")
    case = json.loads(lines[1])
    assert set(case) == {"text", "pattern", "min_sub_len"}
    # the minimized text still shows the bug and cannot lose another byte
    t = case["text"].encode("latin-1")
    assert cli._mismatch(t, case["pattern"], case["min_sub_len"])


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "onevar", "find", "-p", PAT, "-t",
                          EXAMPLE_TEXT.decode(), "--format", "tsv", "--expand"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "1\t3\t14\n14\t6\t36\n"
