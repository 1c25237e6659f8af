import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_VERDICTS: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    """Remember the verdict line of one acceptance criterion."""
    line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
    _VERDICTS[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_VERDICTS):
        terminalreporter.write_line(_VERDICTS[key])
