import numpy as np
import pytest

from nsmvc.dataset import MultiViewDataset, ViewMatrix

ACCEPTANCE = []


def record(criterion, passed, detail=""):
    ACCEPTANCE.append((criterion, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in ACCEPTANCE:
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[passed]
        terminalreporter.write_line(f"[{status}] {criterion}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_dataset(*views, labels=None):
    return MultiViewDataset(
        tuple(ViewMatrix(f"v{i}", np.atleast_2d(np.asarray(v, dtype=float))) for i, v in enumerate(views)),
        labels,
    )
