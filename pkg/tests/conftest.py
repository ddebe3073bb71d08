import numpy as np
import pytest

from fastsobel.synth import random_image

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def make_image():
    def make(w, h, seed=0):
        return random_image(w, h, seed)

    return make


def brute_correlate(img, k):
    """Pure-Python valid-mode correlation, independent of numpy slicing."""
    img = [[int(v) for v in row] for row in np.asarray(img)]
    k = [[int(v) for v in row] for row in np.asarray(k)]
    kh, kw = len(k), len(k[0])
    h, w = len(img), len(img[0])
    return [
        [
            sum(k[i][j] * img[y + i][x + j] for i in range(kh) for j in range(kw))
            for x in range(w - kw + 1)
        ]
        for y in range(h - kh + 1)
    ]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
