import numpy as np
import pytest

from repvec import kernels

ACCEPTANCE_LINES = []


def _backends():
    out = [kernels.numpy_backend]
    try:
        out.append(kernels.numba_backend())
    except ImportError:
        pass
    return out


@pytest.fixture(params=_backends(), ids=lambda m: m.__name__.rsplit("._", 1)[-1])
def backend(request, monkeypatch):
    """Run a test once per kernel backend by patching the dispatched kernels."""
    mod = request.param
    for name in ("lloyd2", "smo_linear", "medoid_index", "combiner_loss_grad"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return mod


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
