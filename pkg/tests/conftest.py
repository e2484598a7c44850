import sys

from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


_ERRORED: set[int] = set()


def pytest_runtest_logreport(report):
    name = report.nodeid.rpartition("::")[2]
    if report.failed and name.startswith("test_criterion_"):
        _ERRORED.add(int(name.split("_")[2]))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in mod.TITLES.items():
        fallback = ("FAIL", "raised before reaching a verdict") if n in _ERRORED else ("NOT RUN", "")
        verdict, detail = mod.VERDICTS.get(n, fallback)
        terminalreporter.write_line(f"criterion {n:2d} {verdict:7s} {title}: {detail}")
