import numpy as np
import pytest

from pspin import kernels
from pspin.model import exponents
from pspin.patterns import generate


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Exercise every kernel once so JIT compilation stays out of timed tests."""
    xi = generate(16, 3, 0)
    cols = xi.cols()
    sigma = xi.row_state(0)
    spins = sigma.to_pm1()
    for p in (1.5, 2.0, 3.0):
        m = kernels.overlaps(xi.words, sigma.words, 16)
        kernels.abs_pow_sum(m, p)
        kernels.delta_raw(m, cols[0], int(spins[0]), p)
        kernels.delta_raw_all(m, cols, spins, p)
        kernels.sweep_flips(m.copy(), cols, spins.copy(), np.arange(16, dtype=np.int64), p, 0.0)
        kernels.best_flip(m, cols, spins, p)
        kernels.all_states_lm_mask(cols[:8], p, 0.0, False)
        kernels.all_states_ground(cols[:8], p)
        kernels.scan_swaps_max(
            m.copy(), spins.copy(), cols,
            np.array([0], dtype=np.int64), np.array([1], dtype=np.int64), p,
        )
        kernels.scan_swaps_lm(
            m.copy(), spins.copy(), cols,
            np.array([1], dtype=np.int64), np.array([0], dtype=np.int64), p, 0.0, False,
        )
        kernels.batch_abs_pow_sums(xi.words, xi.words[:2], 16, p)
    kernels.hamming_words(xi.words[0], xi.words[1])
    kernels.popcount_words(xi.words[0])


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def exps2():
    return exponents(2.0)
