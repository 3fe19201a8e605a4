from helpers import RESULTS


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        parts = RESULTS[k]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts if d)
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
