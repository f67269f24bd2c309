import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE = "test_acceptance.py::test_criterion_"


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import CRITERIA

    outcome = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if ACCEPTANCE in nodeid and getattr(rep, "when", "call") in ("call", "setup"):
                k = int(nodeid.rsplit("_", 1)[1])
                if status != "passed" or k not in outcome:
                    outcome[k] = "PASS" if status == "passed" else "FAIL"
    if not outcome:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in CRITERIA.items():
        terminalreporter.write_line(f"criterion {k}: {outcome.get(k, 'NOT RUN')} - {title}")
