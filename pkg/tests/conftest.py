import pytest

ACCEPTANCE: dict = {}


@pytest.fixture
def acceptance():
    """Record one verdict line per acceptance criterion."""
    def record(number, ok, detail=""):
        ACCEPTANCE[number] = (ok, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line("criterion %2d: %s  %s" % (k, "PASS" if ok else "FAIL", detail))
