import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_state(rng, dim=2):
    c = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return c / np.linalg.norm(c)


def random_hermitian(rng, dim, scale=1.0):
    M = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (M + M.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        status, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {status} - {detail}")
