"""Shared test configuration: one summary line per acceptance criterion."""

import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in getattr(rep, "nodeid", "") or rep.when != "call" and outcome != "error":
                continue
            props = dict(getattr(rep, "user_properties", []))
            crit = props.get("criterion")
            if crit is None:
                continue
            status = "PASS" if outcome == "passed" else "FAIL"
            lines.append((int(crit), f"criterion {crit:>2}: {status}  {props.get('title', '')}  [{props.get('detail', rep.nodeid)}]"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
