"""Special-function kernel tests against independent oracles."""

import math

import numpy as np
import pytest

from tailtest.specfun import (EULER_GAMMA, digamma, dilog_exp, ln_gamma,
                              ln_gamma_array, zeta_int)

ZETA2 = math.pi ** 2 / 6.0


def zeta_partial_sum(k, terms=1_000_000):
    """Oracle: direct partial sum plus an integral tail bound."""
    ls = np.arange(1, terms + 1, dtype=float)
    partial = float(np.sum(ls ** (-float(k))))
    tail = terms ** (1.0 - k) / (k - 1.0)  # int_terms^inf x^-k dx
    return partial + tail


def dilog_series(y, terms=60):
    """Oracle: direct summation of sum e^(-ly)/l^2."""
    return sum(math.exp(-l * y) / l ** 2 for l in range(1, terms + 1))


class TestLnGamma:
    def test_gamma_one_is_one(self):
        assert abs(ln_gamma(1.0 + 0.0j)) < 1e-12

    def test_gamma_two_is_one(self):
        assert abs(ln_gamma(2.0 + 0.0j)) < 1e-12

    def test_modulus_at_one_plus_i(self):
        # |Gamma(1+ix)|^2 = pi x / sinh(pi x), evaluated at x = 1
        expected = math.sqrt(math.pi / math.sinh(math.pi))
        got = abs(np.exp(ln_gamma(1.0 + 1.0j)))
        assert got == pytest.approx(expected, rel=1e-10)
        assert got == pytest.approx(0.5215640469, abs=5e-10)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            ln_gamma(-1.0 + 2.0j)
        with pytest.raises(ValueError):
            ln_gamma(0.0 + 1.0j)

    def test_real_axis_against_stdlib(self):
        # independent reference: C library gamma via math.gamma
        xs = [0.5, 1.5] + [1.0 + 1.0 / a for a in range(1, 11)]
        for x in xs:
            got = math.exp(ln_gamma(complex(x)).real)
            assert got == pytest.approx(math.gamma(x), rel=1e-12)

    def test_half_integer_closed_forms(self):
        assert math.exp(ln_gamma(0.5 + 0j).real) == pytest.approx(
            math.sqrt(math.pi), rel=1e-13)
        assert math.exp(ln_gamma(1.5 + 0j).real) == pytest.approx(
            math.sqrt(math.pi) / 2.0, rel=1e-13)

    def test_modulus_law_on_grid(self):
        xs = np.linspace(0.1, 50.0, 120)
        vals = ln_gamma_array(1.0 + 1j * xs)
        lhs = np.exp(2.0 * vals.real) * np.sinh(math.pi * xs) / (math.pi * xs)
        assert np.max(np.abs(lhs - 1.0)) < 1e-10

    def test_recurrence_on_strip(self):
        rng = np.random.default_rng(3)
        z = rng.uniform(0.05, 2.0, 200) + 1j * rng.uniform(-1e3, 1e3, 200)
        lhs = ln_gamma_array(z + 1.0) - ln_gamma_array(z) - np.log(z)
        assert np.max(np.abs(lhs)) < 1e-11
        # the full strip reaches |ln Gamma| ~ 1.5e4, where an absolute
        # bound is conditioning-limited; check relative there
        z = rng.uniform(0.05, 2.0, 200) + 1j * rng.uniform(-1e4, 1e4, 200)
        lhs = ln_gamma_array(z + 1.0) - ln_gamma_array(z) - np.log(z)
        scale = np.maximum(1.0, np.abs(ln_gamma_array(z)))
        assert np.max(np.abs(lhs) / scale) < 1e-14


class TestDigamma:
    def test_at_one(self):
        assert digamma(1.0 + 0j) == pytest.approx(-EULER_GAMMA, abs=1e-12)

    def test_at_two_by_recurrence(self):
        # psi(2) = psi(1) + 1/1 = 1 - gamma
        assert digamma(2.0 + 0j).real == pytest.approx(1.0 - EULER_GAMMA,
                                                       abs=1e-12)

    def test_schwarz_reflection(self):
        z = 1.0 + 3.0j
        assert digamma(np.conj(z)) == pytest.approx(np.conj(digamma(z)),
                                                    abs=1e-13)

    def test_series_representation(self):
        # the defining series at z = 1 - it: -gamma - sum it/(l(l - it))
        t = 0.7
        total = 0.0 + 0.0j
        for l in range(1, 2_000_000):
            total += 1j * t / (l * (l - 1j * t))
        oracle = -EULER_GAMMA - total
        assert digamma(1.0 - 1j * t) == pytest.approx(oracle, abs=2e-6)

    def test_is_derivative_of_ln_gamma(self):
        h = 1e-5
        for z in (0.7 + 0.4j, 1.3 - 2.0j, 1.9 + 9.0j):
            numeric = (ln_gamma(z + h) - ln_gamma(z - h)) / (2.0 * h)
            assert numeric == pytest.approx(digamma(z), abs=1e-6)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            digamma(-0.5 + 0j)


class TestZeta:
    def test_zeta2(self):
        oracle = zeta_partial_sum(2)
        assert zeta_int(2) == pytest.approx(oracle, abs=1e-10)
        assert zeta_int(2) == pytest.approx(ZETA2, rel=1e-14)
        assert zeta_int(2) == pytest.approx(1.6449340668, abs=1e-9)

    def test_zeta4(self):
        assert zeta_int(4) == pytest.approx(zeta_partial_sum(4), abs=1e-12)
        assert zeta_int(4) == pytest.approx(math.pi ** 4 / 90.0, rel=1e-14)
        assert zeta_int(4) == pytest.approx(1.0823232337, abs=1e-9)

    def test_large_argument(self):
        assert zeta_int(60) == pytest.approx(1.0, abs=1e-15)
        assert zeta_int(200) == 1.0
        assert zeta_int(80) == pytest.approx(1.0 + 2.0 ** -80.0, rel=1e-14)

    def test_domain_error(self):
        for bad in (1, 0, -3):
            with pytest.raises(ValueError):
                zeta_int(bad)


class TestDilogExp:
    def test_endpoints(self):
        assert dilog_exp(0.0) == pytest.approx(ZETA2, rel=1e-15)
        assert dilog_exp(800.0) == pytest.approx(0.0, abs=1e-300)
        assert dilog_exp(math.inf) == 0.0

    def test_at_one_vs_series(self):
        assert dilog_exp(1.0) == pytest.approx(dilog_series(1.0), abs=1e-12)

    def test_identity_branch_matches_series(self):
        # below ln 2 the implementation switches to the reflection identity
        for y in (0.01, 0.1, 0.3, 0.6):
            oracle = dilog_series(y, terms=8000)
            assert dilog_exp(y) == pytest.approx(oracle, abs=1e-11)

    def test_monotone_and_bounded(self):
        ys = np.logspace(-3, 1.5, 80)
        vals = np.array([dilog_exp(y) for y in ys])
        assert np.all(np.diff(vals) < 0.0)
        assert np.all(vals >= 0.0)
        assert np.all(vals <= ZETA2)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            dilog_exp(-0.1)
