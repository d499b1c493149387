# tests/conftest.py
import os

import numpy as np
import pytest
from mpmath import mp

from src.data_pipeline.zero_store import ZeroSet, load_zeros
from src.number_theory.relations import RelationRow, RelationSystem

FIRST_ZEROS = [
    14.134725142, 21.022039639, 25.010857580, 30.424876126, 32.935061588,
    37.586178159, 40.918719012, 43.327073281, 48.005150881, 49.773832478,
]


@pytest.fixture
def example_1():
    """alpha_1 + alpha_2 = log 2/(2 pi), alpha_1 - alpha_2 = (1/2) log 3/(2 pi)"""
    return RelationSystem(2, (RelationRow((1, 1), 1, 1, 2), RelationRow((1, -1), 1, 2, 3)))


@pytest.fixture
def example_2():
    """2 alpha_1 + alpha_2 = log 5/(2 pi), 2 alpha_1 + 3 alpha_2 = log 7/(2 pi)"""
    return RelationSystem(2, (RelationRow((2, 1), 1, 1, 5), RelationRow((2, 3), 1, 1, 7)))


@pytest.fixture
def empty_system():
    return RelationSystem(2, ())


@pytest.fixture(scope="session")
def true_zeros():
    """First 40 zeros computed with mpmath"""
    with mp.workdps(20):
        gammas = [float(mp.zetazero(k).imag) for k in range(1, 41)]
    return ZeroSet(np.array(gammas), dataset_id="mpmath-40")


@pytest.fixture(scope="session")
def synthetic_zeros():
    """300k strictly increasing heights with zero-like spacing, spanning several chunks"""
    rng = np.random.default_rng(20240601)
    gaps = rng.uniform(0.05, 1.5, size=300_000)
    return ZeroSet(14.0 + np.cumsum(gaps), dataset_id="synthetic")


@pytest.fixture(scope="session")
def thousand_zeros(pytestconfig):
    """First 1000 zeros from mpmath, kept in the pytest cache between runs"""
    path = pytestconfig.cache.mkdir("zeta_zeros") / "first_1000.txt"
    if not path.exists():
        with mp.workdps(20):
            lines = [mp.nstr(mp.zetazero(k).imag, 17) for k in range(1, 1001)]
        path.write_text("# first 1000 zeros, mpmath.zetazero\n" + "\n".join(lines) + "\n")
    return load_zeros(str(path))


@pytest.fixture(scope="session")
def real_zeros():
    path = os.environ.get("ZFP_ZEROS_FILE")
    if not path:
        pytest.skip("set ZFP_ZEROS_FILE to a published table of zeros")
    return load_zeros(path)


@pytest.fixture
def zeros_text_file(tmp_path, true_zeros):
    path = tmp_path / "zeros.txt"
    lines = ["# first zeros"] + [repr(float(g)) for g in true_zeros.gammas]
    path.write_text("\n".join(lines) + "\n")
    return path
