import itertools

import numpy as np
import pytest

from sompca.evaluation import data_synth

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    key = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        ok = rep.outcome == "passed"
        prev = _acceptance.get(key, (True, marker.args[1]))
        _acceptance[key] = (prev[0] and ok, marker.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_acceptance):
        ok, title = _acceptance[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {title}")


def naive_mode_product(t, u, n):
    """Entry-by-entry n-mode product by explicit summation."""
    t = np.asarray(t, dtype=float)
    out_shape = list(t.shape)
    out_shape[n] = 1
    out = np.zeros(out_shape)
    for idx in itertools.product(*(range(d) for d in out_shape)):
        total = 0.0
        for i in range(t.shape[n]):
            src = list(idx)
            src[n] = i
            total += t[tuple(src)] * u[i]
        out[idx] = total
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# Fixed synthetic set shared by several acceptance criteria: 6 classes of 10
# samples, rank-2 class means, shape (10, 8, 6).
ACCEPT_SET = dict(n_classes=6, per_class=10, shape=(10, 8, 6), class_separation=10.0,
                  noise_sigma=1.0, seed=0, mean_rank=2)


@pytest.fixture(scope="session")
def accept_data():
    return data_synth(**ACCEPT_SET)
