import os
import time

import pytest

from fracube.pipeline import classify_all


def _worker_count() -> int:
    return min(8, os.cpu_count() or 1)


@pytest.fixture(scope="session")
def timings() -> dict:
    return {}


@pytest.fixture(scope="session")
def full_report(timings):
    """The complete order-3, 7-piece classification (parallel workers)."""
    t0 = time.time()
    report = classify_all(3, 7, workers=_worker_count())
    timings["parallel"] = time.time() - t0
    return report


@pytest.fixture(scope="session")
def workers() -> int:
    return _worker_count()
