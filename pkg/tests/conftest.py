"""Shared fixtures: one ladder cache for the whole session.

The cache is built once (about ten seconds) and kept under ``tests/.cache``
so later runs only parse it.  Set ``LADDERLAB_TEST_CACHE_DIR`` to move it.
"""

import os
from pathlib import Path

import pytest

from ladderlab.errors import CacheMismatch
from ladderlab.ladder import build_ladder, load_cache, save_cache

SUITE_T0 = 200.0
# Components of order 3 above pi * 10^4 reach ~3.3e4.
SUITE_T_MAX = 34000.0
CORRECTION_ORDER = 6


def _cache_dir() -> Path:
    root = os.environ.get("LADDERLAB_TEST_CACHE_DIR")
    return Path(root) if root else Path(__file__).parent / ".cache"


@pytest.fixture(scope="session")
def cache_file():
    """Path of the session ladder cache, built on first use."""
    path = _cache_dir() / f"ladder_t0-{SUITE_T0:g}_tmax-{SUITE_T_MAX:g}_order-{CORRECTION_ORDER}.tsv"
    if path.exists():
        try:
            load_cache(path, t0=SUITE_T0, t_max=SUITE_T_MAX, correction_order=CORRECTION_ORDER)
            return path
        except CacheMismatch:
            path.unlink()
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".partial")
    save_cache(build_ladder(SUITE_T0, SUITE_T_MAX), tmp)
    tmp.replace(path)
    return path


@pytest.fixture(scope="session")
def model(cache_file):
    return load_cache(cache_file)


@pytest.fixture(scope="session")
def small_model():
    """Short in-memory ladder for tests that tamper with or rebuild tables."""
    return build_ladder(SUITE_T0, 1200.0)
