import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from vdwfriction.dipole_avg import (
    CouplingU,
    FixedOrientation,
    as_orientation,
    fixed_orientation_contract,
    isotropic_contract,
    orientation_average_mc,
    random_unit_vectors,
)
from vdwfriction.errors import NormalizationError, PoleError
from vdwfriction.greens import green_electric, projectors
from vdwfriction.oracle import monte_carlo_report

Z = np.array([0.0, 0.0, 1.0])
X_HAT = np.array([1.0, 0.0, 0.0])
ALPHA, BETA = projectors(Z)

dyadics = arrays(np.complex128, (3, 3), elements=st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                                    allow_infinity=False))


@pytest.mark.parametrize("X, Y, expected", [
    (BETA, BETA, 6 / 9),
    (ALPHA, BETA, 2 / 9),
    (ALPHA, ALPHA, 2 / 9),
])
def test_isotropic_projector_traces(X, Y, expected):
    assert isotropic_contract(X, Y) == pytest.approx(expected, rel=1e-15)


def test_fixed_parallel_dipoles():
    assert fixed_orientation_contract(BETA, BETA, Z, Z) == pytest.approx(4.0)


def test_fixed_crossed_dipoles_vanish():
    assert fixed_orientation_contract(BETA, BETA, Z, X_HAT) == 0


def test_fixed_rejects_non_unit():
    with pytest.raises(NormalizationError):
        fixed_orientation_contract(BETA, BETA, 2 * Z, X_HAT)


@given(dyadics, dyadics, dyadics, st.complex_numbers(max_magnitude=5, allow_nan=False,
                                                     allow_infinity=False))
def test_isotropic_bilinear(X, X2, Y, c):
    lhs = isotropic_contract(c * X + X2, Y)
    rhs = c * isotropic_contract(X, Y) + isotropic_contract(X2, Y)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))
    lhs = isotropic_contract(Y, c * X + X2)
    rhs = c * isotropic_contract(Y, X) + isotropic_contract(Y, X2)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


def test_monte_carlo_matches_isotropic_projectors():
    rep = monte_carlo_report(BETA, BETA, n_samples=1_000_000, seed=7)
    assert rep.passed, rep


def test_monte_carlo_matches_isotropic_green_dyadics():
    G1 = green_electric(1.0, np.array([0.3, 0.2, 0.9]))
    G2 = green_electric(1.0, np.array([-0.4, 1.1, 0.5]))
    rep = monte_carlo_report(G1, G2, n_samples=1_000_000, seed=11)
    assert rep.passed, rep
    assert rep.method == "monte_carlo"


def test_monte_carlo_is_seeded():
    rng1, rng2 = np.random.default_rng(5), np.random.default_rng(5)
    assert orientation_average_mc(BETA, ALPHA, 1000, rng1) == orientation_average_mc(BETA, ALPHA, 1000, rng2)


def test_random_unit_vectors_are_unit():
    u = random_unit_vectors(500, np.random.default_rng(0))
    np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0, rtol=1e-14)


class TestCoupling:
    def test_sign_follows_detuning(self):
        assert CouplingU(1.0, 0.02).sign == 1
        assert CouplingU(1.0, -0.02).sign == -1
        assert CouplingU(2.0, -0.5).value == -4.0

    def test_zero_detuning(self):
        with pytest.raises(PoleError):
            CouplingU(1.0, 0.0)

    def test_positive_numerator(self):
        with pytest.raises(ValueError):
            CouplingU(0.0, 0.1)


def test_as_orientation_forms():
    assert as_orientation(None) is None
    fo = FixedOrientation(Z, X_HAT)
    assert as_orientation(fo) is fo
    assert isinstance(as_orientation((Z, X_HAT)), FixedOrientation)
