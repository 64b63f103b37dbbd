import pytest

_LINES = []


class Recorder:
    """Collects one pass/fail line per acceptance criterion and asserts it."""

    def check(self, number, ok, detail):
        tag = "PASS" if ok else "FAIL"
        line = f"[{tag}] acceptance {number}: {detail}"
        _LINES.append(line)
        assert ok, line


@pytest.fixture(scope="session")
def acceptance():
    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _LINES:
        terminalreporter.write_line(line)
