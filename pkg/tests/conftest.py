import numpy as np
import pytest

from qbc.sim.kernels import available_backends, load_backend


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=available_backends())
def kernel_impl(request):
    return load_backend(request.param)


_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion test."""
    entry = {"name": request.node.name, "detail": ""}
    _ACCEPTANCE.append(entry)

    def note(detail):
        entry["detail"] = detail

    yield note
    entry["passed"] = not getattr(request.node, "_failed", False)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and rep.failed:
        item._failed = True


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for e in _ACCEPTANCE:
        status = "PASS" if e.get("passed") else "FAIL"
        terminalreporter.write_line(f"{status}  {e['name']}  {e['detail']}")
