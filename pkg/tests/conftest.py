import pytest

from ulamc import _backend

BACKENDS = ["numpy"] + (["cython"] if _backend.compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available kernel core."""
    core = _backend.pure if request.param == "numpy" else _backend.compiled
    monkeypatch.setattr(_backend, "core", core)
    return core
