"""Reduced geometry and kinematics of an atom pair."""
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .dipole_avg import CouplingU
from .errors import CausalityError, DomainError, NormalizationError, PoleError, ValidityError
from .greens import UNIT_TOL

Z_HAT = np.array([0.0, 0.0, 1.0])
X_HAT = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class PairState:
    """Reduced state of the moving excited atom A and the ground-state atom B.

    Parameters
    ----------
    x : float
        Reduced separation ``k_A R``.
    rho : float
        Wavenumber ratio ``k_B / k_A``; the reduced detuning is ``1 - rho``.
    beta_R : float
        Radial velocity over c, positive when the atoms recede.
    beta_perp : float
        Magnitude of the perpendicular velocity over c.
    r_hat, perp_hat : ndarray
        Unit separation direction (A minus B) and unit perpendicular
        velocity direction.
    T_red : float or None
        Reduced observation time ``c k_A T``; ``None`` means the long-time
        (time-averaged) limit.
    coupling_numerator : float
        Numerator of the coupling scalar; the coupling is this divided by the
        detuning.
    gamma_A, gamma_B : float
        Reduced linewidths ``Gamma / omega_A``.
    """

    x: float
    rho: float
    beta_R: float = 0.0
    beta_perp: float = 0.0
    r_hat: np.ndarray = field(default_factory=lambda: Z_HAT.copy())
    perp_hat: np.ndarray = field(default_factory=lambda: X_HAT.copy())
    T_red: Optional[float] = None
    coupling_numerator: float = 1.0
    gamma_A: float = 0.0
    gamma_B: float = 0.0

    def __post_init__(self):
        if not self.x > 0:
            raise DomainError(f"reduced separation must be positive, got {self.x}")
        if not self.rho > 0:
            raise DomainError(f"rho must be positive, got {self.rho}")
        if self.beta_perp < 0:
            raise DomainError("beta_perp is a magnitude and must be >= 0")
        r = np.asarray(self.r_hat, dtype=float)
        p = np.asarray(self.perp_hat, dtype=float)
        if abs(np.linalg.norm(r) - 1) > UNIT_TOL or abs(np.linalg.norm(p) - 1) > UNIT_TOL:
            raise NormalizationError("r_hat and perp_hat must be unit vectors")
        if abs(r @ p) > 1e-10:
            raise NormalizationError("perp_hat must be orthogonal to r_hat")
        object.__setattr__(self, "r_hat", r)
        object.__setattr__(self, "perp_hat", p)

    @classmethod
    def from_vectors(cls, R_vec, velocity, rho, **kw):
        """Build a state from a separation vector and a velocity vector."""
        R_vec = np.asarray(R_vec, dtype=float)
        v = np.asarray(velocity, dtype=float)
        x = float(np.linalg.norm(R_vec))
        if x == 0:
            raise DomainError("zero separation")
        n = R_vec / x
        b_r = float(v @ n)
        vp = v - b_r * n
        b_p = float(np.linalg.norm(vp))
        if b_p <= 1e-14 * float(np.linalg.norm(v)):
            # Rounding residue of a purely radial velocity.
            b_p = 0.0
        if b_p > 0:
            p_hat = vp / b_p
        else:
            trial = X_HAT if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
            p_hat = trial - (trial @ n) * n
            p_hat /= np.linalg.norm(p_hat)
        return cls(x=x, rho=rho, beta_R=b_r, beta_perp=b_p, r_hat=n, perp_hat=p_hat, **kw)

    def with_(self, **changes):
        """Copy with fields replaced."""
        return replace(self, **changes)

    @property
    def delta(self):
        """Reduced detuning ``Delta / (c k_A) = 1 - rho``."""
        return 1.0 - self.rho

    @property
    def k_b(self):
        return self.rho

    @property
    def coupling(self):
        return CouplingU(self.coupling_numerator, self.delta)

    @property
    def R_vec(self):
        return self.x * self.r_hat

    @property
    def velocity(self):
        return self.beta_R * self.r_hat + self.beta_perp * self.perp_hat

    @property
    def k_a_doppler(self):
        """Doppler-shifted wavenumber of atom A, ``1 - beta_R``."""
        return 1.0 - self.beta_R

    @property
    def delta_doppler(self):
        """Doppler-shifted reduced detuning ``1 - rho (1 + beta_R)``."""
        return self.delta - self.rho * self.beta_R

    def require_detuning(self):
        if self.delta == 0:
            raise PoleError("rho = 1: zero detuning")
        if self.delta_doppler == 0:
            raise PoleError(
                f"Doppler shift closes the detuning at beta_R = {self.delta / self.rho:g}"
            )

    def require_causal(self):
        """Raise unless the photon round trip fits in the observation time."""
        if self.T_red is not None and not self.T_red * (1.0 + self.beta_R) > 2.0 * self.x:
            raise CausalityError(
                f"T(1 + beta_R) = {self.T_red * (1 + self.beta_R):g} <= 2x = {2 * self.x:g}"
            )


def validity_problems(rho, gamma_A, gamma_B, T_red=None, small=0.1):
    """List violated conditions of the quasiresonant window.

    The checks are ``Gamma_{A,B} < |Delta| << omega_{A,B}`` (with ``<<`` read
    as ``|Delta| < small * omega``) and, when an observation time is given,
    ``2 pi / |Delta| < T << 2 pi / Gamma`` (``T < small * 2 pi / Gamma``).
    """
    delta = abs(1.0 - rho)
    out = []
    if delta == 0:
        return ["zero detuning"]
    for name, g in (("Gamma_A", gamma_A), ("Gamma_B", gamma_B)):
        if not g < delta:
            out.append(f"Gamma_{{A,B}} < Delta_{{AB}} failed: {name} = {g:g} >= |Delta| = {delta:g}")
    if not delta < small * min(1.0, rho):
        out.append(f"Delta_{{AB}} << omega_{{A,B}} failed: |Delta|/omega = {delta / min(1.0, rho):g}")
    if T_red is not None:
        if not T_red > 2 * np.pi / delta:
            out.append(f"2pi/|Delta_{{AB}}| < T failed: T = {T_red:g}, 2pi/|Delta| = {2 * np.pi / delta:g}")
        g_max = max(gamma_A, gamma_B)
        if g_max > 0 and not T_red < small * 2 * np.pi / g_max:
            out.append(f"T << 2pi/Gamma_{{A,B}} failed: T = {T_red:g}, 2pi/Gamma = {2 * np.pi / g_max:g}")
    return out


def check_validity(state, strict=True):
    """Raise :class:`ValidityError` (strict) or return the problem list."""
    problems = validity_problems(state.rho, state.gamma_A, state.gamma_B, state.T_red)
    if problems and strict:
        raise ValidityError("; ".join(problems))
    return problems
