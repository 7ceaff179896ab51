import re
from collections import defaultdict

CRITERIA_TITLES = {
    1: "table reproduction (all rows of both tables, exact)",
    2: "Noether identity for every scenario plus the trivial group",
    3: "Hirzebruch-Jung suite (round-trip to n = 200, chain data)",
    4: "order-11 Diophantine stages (8 quadruples, survivors)",
    5: "rationality certificates (xv and both klein options)",
    6: "intermediate values asserted during configuration builds",
    7: "property suites (oracles, adjunction, commutativity, reversal)",
    8: "minimality and Kodaira dimension rendered as annotations only",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion."""
    outcomes = defaultdict(lambda: {"passed": 0, "failed": 0})
    pattern = re.compile(r"test_criterion_(\d+)")
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            match = pattern.search(getattr(report, "nodeid", ""))
            if match:
                key = int(match.group(1))
                outcomes[key]["failed" if status != "passed" else "passed"] += 1
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA_TITLES):
        if number not in outcomes:
            continue
        counts = outcomes[number]
        verdict = "PASS" if counts["failed"] == 0 else "FAIL"
        detail = f"{counts['passed']} passed"
        if counts["failed"]:
            detail += f", {counts['failed']} failed"
        terminalreporter.write_line(
            f"criterion {number}: {verdict}  ({detail})  {CRITERIA_TITLES[number]}")
