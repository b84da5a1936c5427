import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

EXAMPLE_TEXT = b"aabcababcbccbaaaabbbabaaabbbbcbbbaaa"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
