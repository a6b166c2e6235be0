import pytest

LAM = 0.1402

# criterion id -> (passed, detail); filled in by test_acceptance
ACCEPTANCE = {}


@pytest.fixture
def lam():
    return LAM


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] AC{key}: {detail}")
