import numpy as np
import pytest

from pspin.dynamics import (
    FIRST_IMPROVEMENT,
    ORDER_FIXED,
    STEEPEST,
    DescentPolicy,
    default_tie_epsilon,
    descend,
    perturb,
)
from pspin.energy import energy_full
from pspin.landscape import enumerate_local_minima
from pspin.model import exponents
from pspin.patterns import SpinState, generate, hamming, sym_hamming


def _rng(*key):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


class TestPerturb:
    def test_r_zero(self):
        sigma = generate(50, 1, 3).row_state(0)
        assert perturb(sigma, 0.0, _rng(1)) == sigma

    def test_cardinality(self):
        sigma = generate(100, 1, 3).row_state(0)
        out = perturb(sigma, 0.5, _rng(1))
        assert hamming(out, sigma) == 50
        out2 = perturb(sigma, 0.13, _rng(2))
        assert hamming(out2, sigma) == 13

    def test_deterministic(self):
        sigma = generate(80, 1, 9).row_state(0)
        assert perturb(sigma, 0.25, _rng(7)) == perturb(sigma, 0.25, _rng(7))

    def test_domain(self):
        sigma = generate(10, 1, 3).row_state(0)
        with pytest.raises(ValueError):
            perturb(sigma, 0.6, _rng(1))


class TestDescend:
    def test_already_minimal(self):
        xi = generate(24, 1, 5)
        res = descend(xi.row_state(0), xi, exponents(2.0), DescentPolicy(), _rng(3))
        assert res.flips == 0
        assert res.converged
        assert res.certificate is not None and res.certificate > 0
        assert res.endpoint == xi.row_state(0)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_monotone_trace(self, p):
        xi = generate(60, 12, 8)
        ex = exponents(p)
        rng = _rng(11, int(p * 10))
        sigma0 = perturb(xi.row_state(0), 0.4, rng)
        res = descend(sigma0, xi, ex, DescentPolicy(), rng)
        tie = default_tie_epsilon(60, ex)
        steps = np.diff(res.energy_trace)
        assert (steps < -tie).all()
        assert res.converged
        # trace endpoints agree with direct evaluation
        assert res.energy_trace[0] == pytest.approx(
            energy_full(sigma0, xi, ex), rel=1e-12
        )
        assert res.energy_trace[-1] == pytest.approx(
            energy_full(res.endpoint, xi, ex), rel=1e-9
        )

    def test_deterministic(self):
        xi = generate(48, 6, 42)
        ex = exponents(2.0)
        out = []
        for _ in range(2):
            rng = _rng(5)
            sigma0 = perturb(xi.row_state(0), 0.3, rng)
            res = descend(sigma0, xi, ex, DescentPolicy(), rng)
            out.append((res.endpoint.tobytes(), res.flips, tuple(res.energy_trace)))
        assert out[0] == out[1]

    def test_endpoints_in_brute_force_set(self):
        ex = exponents(2.0)
        xi = generate(12, 2, 31)
        lm_keys = enumerate_local_minima(xi, ex).state_keys()
        rng = _rng(77)
        for _ in range(100):
            vals = (rng.integers(0, 2, 12, dtype=np.int8) * 2 - 1).astype(np.int8)
            res = descend(SpinState.from_pm1(vals), xi, ex, DescentPolicy(), rng)
            assert res.converged
            assert res.endpoint.tobytes() in lm_keys

    def test_single_pattern_basin(self):
        # a 20% perturbation of the stored pattern flows back to +-pattern
        ex = exponents(2.0)
        xi = generate(12, 1, 13)
        pattern = xi.row_state(0)
        rng = _rng(99)
        for _ in range(50):
            sigma0 = perturb(pattern, 0.2, rng)
            res = descend(sigma0, xi, ex, DescentPolicy(), rng)
            assert sym_hamming(res.endpoint, pattern) == 0

    def test_policy_equivalence_on_strict_landscape(self):
        ex = exponents(2.0)
        for seed in (1, 2, 3):
            xi = generate(14, 3, seed)
            lm_keys = enumerate_local_minima(xi, ex).state_keys()
            rng = _rng(seed, 1)
            for _ in range(20):
                vals = (rng.integers(0, 2, 14, dtype=np.int8) * 2 - 1).astype(np.int8)
                first = descend(
                    SpinState.from_pm1(vals), xi, ex, DescentPolicy(), rng
                )
                steep = descend(
                    SpinState.from_pm1(vals), xi, ex,
                    DescentPolicy(rule=STEEPEST), rng,
                )
                assert first.endpoint.tobytes() in lm_keys
                assert steep.endpoint.tobytes() in lm_keys

    def test_terminates_at_large_n1(self):
        # integer-exact p=2 instance at n1 = 1024 converges well before the
        # sweep cap
        xi = generate(1024, 102, 5)
        rng = _rng(21)
        sigma0 = perturb(xi.row_state(0), 0.5, rng)
        res = descend(sigma0, xi, exponents(2.0), DescentPolicy(), rng)
        assert res.converged
        assert res.sweeps < DescentPolicy().max_sweeps

    def test_max_sweeps_exhaustion(self):
        xi = generate(64, 10, 3)
        rng = _rng(8)
        sigma0 = perturb(xi.row_state(0), 0.5, rng)
        res = descend(
            sigma0, xi, exponents(2.0),
            DescentPolicy(max_sweeps=1, sweep_order=ORDER_FIXED), rng,
        )
        assert not res.converged
        assert res.certificate is None
        assert res.sweeps == 1

    def test_steepest_counts_sweeps(self):
        xi = generate(24, 4, 3)
        rng = _rng(12)
        sigma0 = perturb(xi.row_state(0), 0.25, rng)
        res = descend(sigma0, xi, exponents(2.0), DescentPolicy(rule=STEEPEST), rng)
        assert res.converged
        assert res.sweeps == res.flips + 1

    def test_fixed_order_needs_no_rng(self):
        xi = generate(16, 2, 3)
        res = descend(
            xi.row_state(0), xi, exponents(2.0),
            DescentPolicy(sweep_order=ORDER_FIXED), rng=None,
        )
        assert res.converged

    def test_random_order_requires_rng(self):
        xi = generate(16, 2, 3)
        with pytest.raises(ValueError):
            descend(xi.row_state(0), xi, exponents(2.0), DescentPolicy(), rng=None)


class TestPolicy:
    def test_defaults(self):
        pol = DescentPolicy()
        assert pol.rule == FIRST_IMPROVEMENT
        assert pol.tie_epsilon is None

    def test_validation(self):
        with pytest.raises(ValueError):
            DescentPolicy(rule="wander")
        with pytest.raises(ValueError):
            DescentPolicy(max_sweeps=0)
        with pytest.raises(ValueError):
            DescentPolicy(tie_epsilon=-1.0)

    def test_tie_defaults(self):
        assert default_tie_epsilon(100, exponents(2.0)) == 0.0
        assert default_tie_epsilon(100, exponents(3.0)) == 0.0
        ex = exponents(2.5)
        expected = 1e-12 * 100 ** (2.5 - ex.kappa)
        assert default_tie_epsilon(100, ex) == pytest.approx(expected, rel=1e-12)
