"""Free-space electric and magnetic dyadic Green's functions.

All quantities are in reduced units: lengths in 1/k_A, velocities in units
of c, times in 1/(c k_A). The magnetic dyadic therefore carries no explicit
1/c. Both dyadics include the 1/(4 pi) normalization:

    G(k, R)  = e^{ikR}/(4 pi) [alpha/R + (i/(k R^2) - 1/(k^2 R^3)) beta]
    Gm(k, R) = e^{ikR}/(4 pi) (1/R + i/(k R^2)) [R_hat]_x

with alpha = I - R_hat R_hat, beta = I - 3 R_hat R_hat and
``[u]_x[p, q] = eps_{p s q} u_s``.

Functions accept a single 3-vector (returning a 3x3 array) or a batch of
shape ``(N, 3)`` (returning ``(N, 3, 3)``).
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NormalizationError, SingularityError

#: Smallest k*R accepted before the 1/(kR)^3 term is considered meaningless.
MIN_KR = 1e-8
UNIT_TOL = 1e-12


def _as_batch(R):
    R = np.asarray(R, dtype=float)
    single = R.ndim == 1
    return R.reshape(-1, 3), single


def _check_separation(k, R):
    if k == 0:
        raise SingularityError("wavenumber k must be nonzero")
    r = np.sqrt(np.einsum("ni,ni->n", R, R))
    if np.any(np.abs(k) * r < MIN_KR):
        raise SingularityError(f"k*R below {MIN_KR:g}; Green's dyadic is singular")
    return r


def _unbatch(out, single):
    return out[0] if single else out


def check_unit(u, name="direction"):
    """Return ``u`` as a float array, raising if it is not a unit vector."""
    u = np.asarray(u, dtype=float)
    if u.shape != (3,) or abs(np.linalg.norm(u) - 1.0) > UNIT_TOL:
        raise NormalizationError(f"{name} must be a unit 3-vector, got {u!r}")
    return u


def projectors(r_hat):
    """Transverse and longitudinal projector dyadics for a unit direction.

    Parameters
    ----------
    r_hat : array_like, shape (3,)
        Unit vector along the separation.

    Returns
    -------
    alpha, beta : ndarray, shape (3, 3)
        ``I - r r`` and ``I - 3 r r``.
    """
    n = check_unit(r_hat, "r_hat")
    nn = np.outer(n, n)
    return np.eye(3) - nn, np.eye(3) - 3.0 * nn


def green_electric(k, R_vec):
    """Electric dyadic Green's function at wavenumber ``k`` and separation ``R_vec``."""
    R, single = _as_batch(R_vec)
    _check_separation(k, R)
    return _unbatch(kernels.electric(float(k), R), single)


def green_magnetic(k, R_vec):
    """Magnetic dyadic Green's function (antisymmetric)."""
    R, single = _as_batch(R_vec)
    _check_separation(k, R)
    return _unbatch(kernels.magnetic(float(k), R), single)


def green_shifted_exact(k, R_vec, v, tau):
    """Electric dyadic at the displaced separation ``R_vec - v tau``."""
    R = np.asarray(R_vec, dtype=float) - np.asarray(v, dtype=float) * tau
    return green_electric(k, R)


def magnetic_shifted_exact(k, R_vec, v, tau):
    """Magnetic dyadic at the displaced separation ``R_vec - v tau``."""
    R = np.asarray(R_vec, dtype=float) - np.asarray(v, dtype=float) * tau
    return green_magnetic(k, R)


def radial_velocity(R_vec, v):
    """Split ``v`` into the component along ``R_vec`` and the perpendicular rest."""
    R, single = _as_batch(R_vec)
    n = R / np.linalg.norm(R, axis=1)[:, None]
    v = np.broadcast_to(np.asarray(v, dtype=float), R.shape)
    vr = np.einsum("ni,ni->n", v, n)
    vp = v - vr[:, None] * n
    return (vr[0], vp[0]) if single else (vr, vp)


@dataclass(frozen=True)
class LagCorrections:
    """First-order lag corrections to the displaced Green's dyadics.

    Each dyadic is the full correction for lag time ``lag_time`` (the
    density times tau). The ``_R`` parts are proportional to the radial
    velocity and the ``_perp`` parts to the perpendicular velocity.
    """

    dG_lag_R: np.ndarray
    dGm_lag_R: np.ndarray
    dG_lag_perp: np.ndarray
    dGm_lag_perp: np.ndarray
    lag_time: float

    def electric(self):
        return self.dG_lag_R + self.dG_lag_perp

    def magnetic(self):
        return self.dGm_lag_R + self.dGm_lag_perp


def lag_corrections(k, R_vec, v, tau):
    """Lag corrections of the electric and magnetic dyadics.

    Parameters
    ----------
    k : float
        Reduced wavenumber.
    R_vec : array_like, shape (3,)
        Separation at the observation time.
    v : array_like, shape (3,)
        Reduced velocity.
    tau : float
        Lag time between emission and absorption.

    Returns
    -------
    LagCorrections
    """
    R, single = _as_batch(R_vec)
    _check_separation(k, R)
    vr, vp = radial_velocity(R, v)
    n = R / np.linalg.norm(R, axis=1)[:, None]
    radial = vr[:, None] * n
    *_, dG_R, dGm_R, _, _ = kernels.bundle(float(k), R, radial)
    *_, dG_P, dGm_P, _, _ = kernels.bundle(float(k), R, vp)
    parts = [_unbatch(a * tau, single) for a in (dG_R, dGm_R, dG_P, dGm_P)]
    return LagCorrections(*parts, lag_time=float(tau))


def lag_densities(k, R_vec, v):
    """Electric and magnetic lag corrections per unit lag time."""
    R, single = _as_batch(R_vec)
    _check_separation(k, R)
    *_, dG, dGm, _, _ = kernels.bundle(float(k), R, v)
    return _unbatch(dG, single), _unbatch(dGm, single)


def doppler_phase(k, R_vec, v, tau):
    """Phase factor ``exp(-i k v_R tau)`` accumulated during the lag."""
    vr, _ = radial_velocity(R_vec, v)
    return np.exp(-1j * k * vr * tau)


def green_shifted_linear(k, R_vec, v, tau):
    """First-order expansion of :func:`green_shifted_exact`.

    The Doppler phase is kept as an exact exponential multiplying the
    unshifted dyadic, and the radial and perpendicular lag corrections are
    added.
    """
    G = green_electric(k, R_vec)
    ph = doppler_phase(k, R_vec, v, tau)
    lag = lag_corrections(k, R_vec, v, tau)
    return np.asarray(ph)[..., None, None] * G + lag.electric()


def magnetic_shifted_linear(k, R_vec, v, tau):
    """First-order expansion of :func:`magnetic_shifted_exact`."""
    Gm = green_magnetic(k, R_vec)
    ph = doppler_phase(k, R_vec, v, tau)
    lag = lag_corrections(k, R_vec, v, tau)
    return np.asarray(ph)[..., None, None] * Gm + lag.magnetic()


def green_gradients(k, R_vec):
    """Spatial gradients of both dyadics.

    Uses the identity ``(u . grad) X = i k u_R X - lag_density(u)`` for each
    Cartesian unit vector ``u``.

    Returns
    -------
    dG, dGm : ndarray, shape (..., 3, 3, 3)
        ``dG[..., l, p, q] = d G_pq / d R_l`` and likewise for the magnetic dyadic.
    """
    R, single = _as_batch(R_vec)
    _check_separation(k, R)
    n = R / np.linalg.norm(R, axis=1)[:, None]
    G = kernels.electric(float(k), R)
    Gm = kernels.magnetic(float(k), R)
    dG = np.empty((R.shape[0], 3, 3, 3), dtype=complex)
    dGm = np.empty_like(dG)
    for l in range(3):
        e = np.zeros(3)
        e[l] = 1.0
        *_, lagG, lagGm, _, _ = kernels.bundle(float(k), R, e)
        ikr = (1j * k * n[:, l])[:, None, None]
        dG[:, l] = ikr * G - lagG
        dGm[:, l] = ikr * Gm - lagGm
    return _unbatch(dG, single), _unbatch(dGm, single)


def green_k_derivatives(k, R_vec):
    """Derivatives of the electric and magnetic dyadics with respect to ``k``."""
    R, single = _as_batch(R_vec)
    _check_separation(k, R)
    _, _, G_k, Gm_k, *_ = kernels.bundle(float(k), R, np.zeros(3))
    return _unbatch(G_k, single), _unbatch(Gm_k, single)
