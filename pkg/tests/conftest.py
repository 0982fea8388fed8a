"""Shared pytest wiring for the acceptance gate.

The acceptance tests record one ``criterion NN: PASS/FAIL - <numbers>``
line each; this hook replays them after the run so they are visible even
for passing tests, whose captured output pytest normally swallows.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
