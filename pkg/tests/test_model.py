import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pspin.model import (
    constants_table,
    d_constant,
    e_constant,
    entropy,
    exponents,
    h_constant,
    kappa1_constant,
    load_params,
    phi,
    phi_bar,
    threshold_t,
)


class TestExponents:
    def test_p3(self):
        ex = exponents(3.0)
        assert ex.q == pytest.approx(1.5, abs=1e-15)
        assert ex.p_plus == 3.0
        assert ex.q_minus == 1.5
        assert ex.kappa == 3.0

    def test_p15(self):
        ex = exponents(1.5)
        assert ex.q == pytest.approx(3.0, abs=1e-14)
        assert ex.p_plus == 2.0
        assert ex.q_minus == 2.0
        assert ex.kappa == pytest.approx(1.75, abs=1e-15)

    def test_self_conjugate(self):
        ex = exponents(2.0)
        assert (ex.p, ex.q, ex.p_plus, ex.q_minus, ex.kappa) == (2.0,) * 5

    def test_given_q(self):
        assert exponents(1.5, "q").p == pytest.approx(3.0, abs=1e-14)

    @pytest.mark.parametrize("bad", [1.0, 0.5, -3.0, float("inf"), float("nan")])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            exponents(bad)

    def test_bad_given(self):
        with pytest.raises(ValueError):
            exponents(2.0, "x")

    def test_conjugacy_roundtrip_grid(self):
        for p in np.geomspace(1.0 + 1e-6, 20.0, 200):
            ex = exponents(float(p))
            assert abs(1.0 / ex.p + 1.0 / ex.q - 1.0) < 1e-12
            assert abs(1.0 / ex.p_plus + 1.0 / ex.q_minus - 1.0) < 1e-12
            back = exponents(ex.q, "q")
            assert abs(back.p - ex.p) <= 1e-12 * ex.p

    def test_kappa_continuity_at_2(self):
        below = exponents(2.0 - 1e-12).kappa
        above = exponents(2.0 + 1e-12).kappa
        assert abs(below - 2.0) < 1e-11 and abs(above - 2.0) < 1e-11

    def test_kappa_branches(self):
        for p in (2.5, 3.0, 5.0):
            assert exponents(p).kappa == pytest.approx(p, abs=1e-14)
        for p in (1.2, 1.5, 1.9):
            assert exponents(p).kappa == pytest.approx(1.0 + p / 2.0, abs=1e-14)


class TestEntropy:
    def test_values(self):
        assert entropy(0.5) == pytest.approx(math.log(2.0), abs=1e-15)
        assert entropy(0.0) == 0.0
        assert entropy(1.0) == 0.0
        # direct evaluation oracle at r = 0.1
        r = 0.1
        direct = -r * math.log(r) - 0.9 * math.log(0.9)
        assert entropy(0.1) == pytest.approx(direct, abs=1e-15)
        assert entropy(0.1) == pytest.approx(0.325083, abs=1e-6)

    def test_symmetry_grid(self):
        for r in np.arange(0.0, 1.0 + 1e-9, 1e-3):
            assert entropy(float(r)) == pytest.approx(entropy(float(1.0 - r)), abs=1e-13)

    @pytest.mark.parametrize("bad", [-0.1, 1.1, float("nan")])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            entropy(bad)


class TestPhi:
    def test_phi2_is_4xy(self):
        assert phi(0.25, 0.75, 2.0) == pytest.approx(0.75, abs=1e-15)

    def test_zero_y(self):
        for x in (-2.0, 0.0, 1.3):
            assert phi(x, 0.0, 2.7) == 0.0

    @given(
        st.floats(-5, 5, allow_nan=False),
        st.floats(-5, 5, allow_nan=False),
        st.floats(1.01, 5, allow_nan=False),
    )
    @settings(max_examples=200, deadline=None)
    def test_odd_in_y(self, x, y, p):
        assert phi(x, y, p) == pytest.approx(-phi(x, -y, p), abs=1e-9)

    def test_phi_bar(self):
        assert phi_bar(0.25, 3.0) == pytest.approx(0.875, abs=1e-15)
        for r in np.arange(0.01, 0.5, 0.01):
            for p in (1.0, 1.5, 2.0, 4.0):
                assert 0.0 < phi_bar(float(r), p) < 1.0

    def test_nonfinite(self):
        with pytest.raises(ValueError):
            phi(float("nan"), 1.0, 2.0)


class TestThreshold:
    def test_examples(self):
        assert threshold_t(0.25, 2.0) == pytest.approx(0.5, abs=1e-15)
        assert threshold_t(0.5, 2.0) == pytest.approx(0.5, abs=1e-15)
        assert 0.0 < threshold_t(1e-6, 2.0) < 1e-4

    def test_positive_grid(self):
        for r in np.arange(0.001, 0.5, 0.001):
            for p in np.arange(2.0, 6.01, 0.5):
                assert threshold_t(float(r), float(p)) > 0.0

    @pytest.mark.parametrize("r,p", [(0.0, 2.0), (0.6, 2.0), (0.25, 1.5)])
    def test_domain(self, r, p):
        with pytest.raises(ValueError):
            threshold_t(r, p)


class TestConstants:
    def test_d_at_2(self):
        # direct arithmetic: 2^2 (3 - 2 * (1/2) * 2) = 4
        assert d_constant(2.0) == pytest.approx(4.0, abs=1e-12)

    def test_d_positive_interior(self):
        val = d_constant(1.5)
        assert math.isfinite(val) and val > 0.0

    def test_d_vanishes_toward_1(self):
        assert abs(d_constant(1.0 + 1e-9)) < 1e-6

    @pytest.mark.parametrize("bad", [1.0, 2.5, 0.0])
    def test_d_domain(self, bad):
        with pytest.raises(ValueError):
            d_constant(bad)

    @pytest.mark.parametrize("p", [1.2, 1.5, 2.0, 3.0])
    def test_e_closed_form(self, p):
        closed = 2.0 ** (p / 2.0) * math.gamma(p / 2.0 + 1.0)
        assert e_constant(p) == pytest.approx(closed, abs=1e-9)

    def test_h_partial_sum_oracle(self):
        p = 1.5
        total = 0.0
        for n in range(1, 500):
            total += math.exp(n ** (2 * p - 2) - (n - 1) ** 2 / 4.0)
        assert h_constant(p) == pytest.approx(2.0 * total, rel=1e-12)

    def test_h_domain(self):
        for bad in (1.0, 2.0, 2.5):
            with pytest.raises(ValueError):
                h_constant(bad)

    def test_table_finite_positive(self):
        for p in np.linspace(1.05, 2.0, 12):
            table = constants_table(float(p))
            assert table.d_p > 0 and math.isfinite(table.d_p)
            assert table.e_p > 0 and math.isfinite(table.e_p)
            assert table.kappa1_p > 0 and math.isfinite(table.kappa1_p)
            if p < 2.0:
                assert table.h > 0
                # representable in double precision only away from p = 2
                if p <= 1.8:
                    assert math.isfinite(table.h)
        # the series value exceeds double range at and near the p = 2 endpoint
        assert constants_table(2.0).h == math.inf

    def test_kappa1_value(self):
        # d(2) = 4, e(2) = 2: kappa1 = (1/8) min((1/4)(4/9)4, (2/3)(1/2)2) = 1/18
        assert kappa1_constant(2.0) == pytest.approx(1.0 / 18.0, abs=1e-9)


class TestLoadParams:
    def test_alpha(self):
        lp = load_params(16, 8, exponents(2.0))
        assert lp.alpha == pytest.approx(0.5, abs=1e-15)
        lp3 = load_params(400, 800, exponents(3.0))
        assert lp3.alpha == pytest.approx(800 / 400 ** 1.5, abs=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            load_params(0, 1, exponents(2.0))
