import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

CRITERIA: dict[int, tuple[str, str]] = {}


def record(n: int, name: str, ok: bool):
    CRITERIA[n] = (name, "PASS" if ok else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        name, verdict = CRITERIA[n]
        terminalreporter.write_line(f"CRITERION {n}: {verdict}  {name}")
