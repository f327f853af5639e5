ACCEPTANCE_LABELS = {
    "test_c01": "C1  germ field values reproduce the two reference germs exactly",
    "test_c02": "C2  equivalence grid (d<=4, p<=5): k decides, brute force agrees on every pair",
    "test_c03": "C3  weight-zero germs merge across (p,q); area value always detected",
    "test_c04": "C4  shear matrix entry formula, powers, determinant, eigenvector",
    "test_c05": "C5  exact energy field matches germ prediction at random off-crease points",
    "test_c06": "C6  probe bounds: quadrant min{x1,x2}; half-plane model x1",
    "test_c07": "C7  move-calculus conservation over random legal sequences",
    "test_c08": "C8  mutation tree = Vieta tree; walk p-sequence 1,1,2,5,13,34,...",
    "test_c09": "C9  edge-stretching growth: ell monotone bounded, a_n monotone, p > 100",
    "test_c10": "C10 trailing two-label alternation report",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    reports = []
    for outcome in ("passed", "failed", "error"):
        reports.extend(terminalreporter.stats.get(outcome, []))
    lines = {}
    for rep in reports:
        if getattr(rep, "when", "call") != "call":
            continue
        if "test_acceptance.py" not in str(getattr(rep, "nodeid", "")):
            continue
        name = rep.nodeid.split("::")[-1]
        key = name.split("_", 2)
        prefix = "_".join(key[:2])
        label = ACCEPTANCE_LABELS.get(prefix)
        if label:
            lines[prefix] = (label, rep.outcome)
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for prefix in sorted(lines):
            label, outcome = lines[prefix]
            mark = "PASS" if outcome == "passed" else "FAIL"
            terminalreporter.write_line(f"[{mark}] {label}")
