import numpy as np
import pytest

from vdwfriction.errors import CausalityError, DomainError, NormalizationError, PoleError, ValidityError
from vdwfriction.state import PairState, check_validity, validity_problems


def test_from_vectors_decomposes_velocity():
    s = PairState.from_vectors([0.0, 0.0, 2.0], [0.3e-3, 0.0, 0.4e-3], 0.98)
    assert s.x == 2.0
    assert s.beta_R == pytest.approx(0.4e-3)
    assert s.beta_perp == pytest.approx(0.3e-3)
    np.testing.assert_allclose(s.velocity, [0.3e-3, 0.0, 0.4e-3])
    np.testing.assert_allclose(s.R_vec, [0.0, 0.0, 2.0])


def test_from_vectors_radial_only_picks_orthogonal_axis():
    s = PairState.from_vectors([1.0, 1.0, 0.0], [1e-3, 1e-3, 0.0], 0.98)
    assert s.beta_perp == 0
    assert abs(s.perp_hat @ s.r_hat) < 1e-15


@pytest.mark.parametrize("kw, err", [
    (dict(x=0.0, rho=0.9), DomainError),
    (dict(x=1.0, rho=-1.0), DomainError),
    (dict(x=1.0, rho=0.9, beta_perp=-1e-3), DomainError),
    (dict(x=1.0, rho=0.9, r_hat=np.array([0.0, 0.0, 2.0])), NormalizationError),
    (dict(x=1.0, rho=0.9, perp_hat=np.array([0.0, 0.0, 1.0])), NormalizationError),
])
def test_invalid_states(kw, err):
    with pytest.raises(err):
        PairState(**kw)


def test_doppler_shifted_quantities():
    s = PairState(x=1.0, rho=0.98, beta_R=1e-3)
    assert s.k_a_doppler == pytest.approx(1 - 1e-3)
    assert s.delta_doppler == pytest.approx(0.02 - 0.98e-3)


def test_detuning_poles():
    with pytest.raises(PoleError):
        PairState(x=1.0, rho=1.0).require_detuning()
    with pytest.raises(PoleError):
        PairState(x=1.0, rho=0.5, beta_R=1.0).require_detuning()


def test_causality():
    PairState(x=1.0, rho=0.98, T_red=2.5).require_causal()
    with pytest.raises(CausalityError):
        PairState(x=1.0, rho=0.98, T_red=1.5).require_causal()


def test_validity_diagnostics_name_the_failed_window():
    problems = validity_problems(0.98, 0.05, 0.0)
    assert any("Gamma_{A,B} < Delta_{AB}" in p for p in problems)
    problems = validity_problems(0.5, 0.0, 0.0)
    assert any("Delta_{AB} << omega_{A,B}" in p for p in problems)
    problems = validity_problems(0.98, 1e-6, 1e-6, T_red=10.0)
    assert any("2pi/|Delta_{AB}| < T" in p for p in problems)
    problems = validity_problems(0.98, 1e-3, 1e-3, T_red=1e4)
    assert any("T << 2pi/Gamma_{A,B}" in p for p in problems)
    assert validity_problems(0.98, 1e-6, 1e-6, T_red=1e3) == []


def test_check_validity_modes():
    s = PairState(x=1.0, rho=0.98, gamma_A=0.05)
    with pytest.raises(ValidityError):
        check_validity(s, strict=True)
    assert check_validity(s, strict=False)
