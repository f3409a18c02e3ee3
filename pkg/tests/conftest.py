import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion_report():
    def report(number, name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {number:>2} {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
