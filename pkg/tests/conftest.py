import pytest

from dp2verify import groups as grp


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("groupcache")


@pytest.fixture(scope="session")
def sp6(cache_dir):
    group, _ = grp.sp6_group(cache_dir)
    return group


@pytest.fixture(scope="session")
def weyl(sp6):
    return grp.weyl_e7_model(sp6)


@pytest.fixture(autouse=True)
def _isolated_cache(cache_dir, monkeypatch):
    monkeypatch.setenv(grp.CACHE_ENV, str(cache_dir))


# --- acceptance summary: one line per criterion ---------------------------------

_criteria: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test belongs to")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        _criteria.setdefault(marker[0], []).append((marker[1], report.outcome, report.nodeid.split("::")[-1]))


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            item.user_properties.append(("criterion", m.args))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        parts = _criteria[n]
        ok = all(outcome == "passed" for _, outcome, _ in parts)
        failed = [name for _, outcome, name in parts if outcome != "passed"]
        line = f"{'PASS' if ok else 'FAIL'}  criterion {n}: {parts[0][0]}"
        if failed:
            line += f"  (failing: {', '.join(failed)})"
        terminalreporter.write_line(line)
