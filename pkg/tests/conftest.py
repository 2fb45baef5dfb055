import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
    missing = [n for n in range(1, 21) if n not in mod.RESULTS]
    if missing:
        terminalreporter.write_line(f"not run: {missing}")
