import functools

import pytest
from contactred.corpus import build_manifest, corpus_manifest
from contactred.symexpr import SamplingConfig


@functools.lru_cache(maxsize=None)
def corpus(name):
    return build_manifest(corpus_manifest(name), name)


@pytest.fixture
def cfg():
    return SamplingConfig(seed=7)


@pytest.fixture(scope="session")
def ex61():
    return corpus("example_6_1")


@pytest.fixture(scope="session")
def r3():
    return corpus("r3_groupoid")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
