import pytest

from d2dstream import _backend, _pycore
from d2dstream.rates import RadioParams, db_to_linear

try:
    from d2dstream import _core
except ImportError:
    _core = None

BACKENDS = [pytest.param(_pycore, id="python")]
if _core is not None:
    BACKENDS.append(pytest.param(_core, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel implementation."""
    monkeypatch.setattr(_backend, "core", request.param)
    return request.param


@pytest.fixture
def radio():
    return RadioParams(B=1.0e6, N0=1.0e-6, P_bmax=db_to_linear(2.0), P_dmax=db_to_linear(0.0))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
