from __future__ import annotations

from hypothesis import settings

# exact factorization can take a few hundred milliseconds on unlucky inputs
settings.register_profile("exact", deadline=None, derandomize=True)
settings.load_profile("exact")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
