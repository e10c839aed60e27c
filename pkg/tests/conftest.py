import pytest

_verdicts: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion, then assert."""

    def record(number: int, title: str, checks: dict[str, bool], detail: str = ""):
        failed = [k for k, ok in checks.items() if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {number:2d} {status}  {title}"
        if failed:
            line += f"  [failed: {', '.join(failed)}]"
        if detail:
            line += f"  ({detail})"
        _verdicts[number] = line
        print(line)
        assert not failed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_verdicts):
        terminalreporter.write_line(_verdicts[n])
