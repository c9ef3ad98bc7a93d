import numpy as np
import pytest
from hypothesis import settings

from qsolvable import corpus

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


@pytest.fixture(scope="session", autouse=True)
def no_invalid_queries():
    """Corpus oracles are shared by the whole session; none may ever see a bad encoding."""
    yield
    bad = {name: o.invalid_queries for name, o in corpus.loaded_oracles().items() if o.invalid_queries}
    assert not bad, f"invalid encodings reached corpus oracles: {bad}"


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def pytest_collection_modifyitems(config, items):
    # acceptance last, so the invalid-query check sees the whole session
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")
