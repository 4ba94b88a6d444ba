"""Roentgen-momentum forces on the moving excited atom.

Prefactor bookkeeping (the one place where the magnetic 1/c is handled):
in reduced units the magnetic dyadic carries no 1/c and velocities are
already ``v/c``, so the conservative force is

    F_c = -16 pi^2 U grad Re{ (a x beta) . Gm . b  (b . G . a) }

and the non-conservative force is

    F_nc = Re{ -8 pi^2 (U / Delta) (A + B) },
    A = 6 L(G, dGm) + L(G_k, dGm) + L(G, dGm_k),
    B = 6 L(dG, Gm) + L(dG_k, Gm) + L(dG, Gm_k),

with ``L(X, Y)_i = eps_{irp} (Y X)_{pr} / 9`` for isotropic dipoles or
``(b . X . a) (a x Y b)`` for fixed ones, ``dG``/``dGm`` the lag densities
(lag corrections per unit lag time) and ``_k`` a derivative in k taken at
``k = k_A = 1``.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dipole_avg import as_orientation
from .errors import PoleError
from .greens import green_electric, green_gradients, green_magnetic, radial_velocity

EIGHT_PI2 = 8.0 * np.pi**2
SIXTEEN_PI2 = 16.0 * np.pi**2


def _levi(X, Y, orientation):
    if orientation is None:
        return kernels.iso_levi(X, Y)
    return kernels.fixed_levi(X, Y, orientation.mu_a, orientation.mu_b)


def assemble_nonconservative(dyadics, numerator, delta, orientation=None):
    """Combine Green's dyadics and lag densities into the non-conservative force.

    Parameters
    ----------
    dyadics : sequence of ndarray, each (N, 3, 3)
        ``(G, Gm, G_k, Gm_k, dG, dGm, dG_k, dGm_k)`` as returned by
        :func:`vdwfriction.kernels.bundle`.
    numerator : float
        Coupling numerator.
    delta : float
        Reduced detuning.

    Returns
    -------
    ndarray, shape (N, 3)
    """
    if delta == 0:
        raise PoleError("rho = 1: zero detuning")
    orientation = as_orientation(orientation)
    G, Gm, G_k, Gm_k, dG, dGm, dG_k, dGm_k = dyadics
    A = 6.0 * _levi(G, dGm, orientation) + _levi(G_k, dGm, orientation) + _levi(G, dGm_k, orientation)
    B = 6.0 * _levi(dG, Gm, orientation) + _levi(dG_k, Gm, orientation) + _levi(dG, Gm_k, orientation)
    return np.real(-EIGHT_PI2 * numerator / delta**2 * (A + B))


def roentgen_nc_batch(R, velocity, rho, numerator=1.0, orientation=None):
    """Non-conservative Roentgen force at many separations, shape ``(N, 3)``."""
    R = np.ascontiguousarray(R, dtype=float).reshape(-1, 3)
    dy = kernels.bundle(1.0, R, velocity)
    return assemble_nonconservative(dy, numerator, 1.0 - rho, orientation)


def roentgen_nonconservative(state, orientation=None):
    """Non-conservative Roentgen force (time derivative of the Roentgen momentum)."""
    state.require_detuning()
    return roentgen_nc_batch(state.R_vec, state.velocity, state.rho,
                             state.coupling_numerator, orientation)[0]


def _conservative_scalar_and_grad(R, velocity, orientation):
    """``C = contraction of Gm G`` with ``beta`` and its R-gradient (v held fixed).

    ``R`` has shape ``(N, 3)``; returns arrays of shape ``(N,)`` and ``(N, 3)``.
    """
    G = green_electric(1.0, R)
    Gm = green_magnetic(1.0, R)
    dG, dGm = green_gradients(1.0, R)
    v = np.asarray(velocity, dtype=float)
    if orientation is None:
        M = Gm @ G
        dM = np.einsum("nlmp,npq->nlmq", dGm, G) + np.einsum("nmp,nlpq->nlmq", Gm, dG)
        w = np.stack([M[:, 1, 2] - M[:, 2, 1], M[:, 2, 0] - M[:, 0, 2],
                      M[:, 0, 1] - M[:, 1, 0]], axis=-1)
        dw = np.stack([dM[:, :, 1, 2] - dM[:, :, 2, 1], dM[:, :, 2, 0] - dM[:, :, 0, 2],
                       dM[:, :, 0, 1] - dM[:, :, 1, 0]], axis=-1)
        return (w @ v) / 9.0, (dw @ v) / 9.0
    a, b = orientation.mu_a, orientation.mu_b
    axv = np.cross(a, v)
    s1 = np.einsum("m,nmj,j->n", axv, Gm, b)
    s2 = np.einsum("p,npq,q->n", b, G, a)
    d1 = np.einsum("m,nlmj,j->nl", axv, dGm, b)
    d2 = np.einsum("p,nlpq,q->nl", b, dG, a)
    return s1 * s2, d1 * s2[:, None] + s1[:, None] * d2


def roentgen_c_batch(R, velocity, rho, numerator=1.0, orientation=None):
    """Conservative Roentgen force at many separations, shape ``(N, 3)``."""
    delta = 1.0 - rho
    if delta == 0:
        raise PoleError("rho = 1: zero detuning")
    R = np.ascontiguousarray(R, dtype=float).reshape(-1, 3)
    _, grad = _conservative_scalar_and_grad(R, velocity, as_orientation(orientation))
    return -SIXTEEN_PI2 * (numerator / delta) * np.real(grad)


def roentgen_conservative(state, orientation=None):
    """Conservative Roentgen force, a gradient of ``Re{Gm G}`` at fixed velocity."""
    state.require_detuning()
    return roentgen_c_batch(state.R_vec, state.velocity, state.rho,
                            state.coupling_numerator, orientation)[0]


def conservative_potential(state, orientation=None):
    """Scalar whose negative gradient is the conservative force: ``16 pi^2 U Re{C}``."""
    state.require_detuning()
    orientation = as_orientation(orientation)
    C, _ = _conservative_scalar_and_grad(state.R_vec[None], state.velocity, orientation)
    return SIXTEEN_PI2 * state.coupling.value * float(np.real(C[0]))


def roentgen_ratios(state):
    """Scaling estimators ``(x^2 |1 - rho|, |1 - rho|, x^2)`` of the Roentgen/vdW ratios.

    The first two bound the conservative force in the near and far field,
    the third the non-conservative force in the near field.
    """
    d = abs(1.0 - state.rho)
    return state.x**2 * d, d, state.x**2


@dataclass(frozen=True)
class RontgenResult:
    f_conservative: np.ndarray
    f_nonconservative: np.ndarray
    ratio_to_vdw: tuple


def roentgen_forces(state, orientation=None):
    return RontgenResult(
        roentgen_conservative(state, orientation),
        roentgen_nonconservative(state, orientation),
        roentgen_ratios(state),
    )


# --- assembly from displaced Green's dyadics ---------------------------------


def lag_density_from_shift(shifted, k, R_vec, v, h_rel=1e-4):
    """Lag density of a displaced-dyadic callable.

    The Doppler phase ``exp(-i k v_R tau)`` is divided out of
    ``shifted(k, R_vec, v, tau)`` and the remaining amplitude is
    differentiated in ``tau`` at 0 by a central difference with
    displacement ``|v| tau = h_rel |R|``. The difference is exact for input
    linear in ``tau`` and gives zero for pure Doppler input at any step.
    """
    R_vec = np.asarray(R_vec, dtype=float)
    v = np.asarray(v, dtype=float)
    speed = np.linalg.norm(v)
    if speed == 0:
        return np.zeros((3, 3), dtype=complex)
    h = h_rel * np.linalg.norm(R_vec) / speed
    vr, _ = radial_velocity(R_vec, v)

    def amp(tau):
        return shifted(k, R_vec, v, tau) * np.exp(1j * k * vr * tau)

    return (amp(h) - amp(-h)) / (2 * h)


def nonconservative_from_shifts(shifted_e, shifted_m, state, orientation=None,
                                h_rel=1e-4, hk=1e-3):
    """Non-conservative force assembled from displaced-dyadic callables.

    ``shifted_e`` and ``shifted_m`` map ``(k, R_vec, v, tau)`` to 3x3 dyadics.
    Lag densities come from :func:`lag_density_from_shift` and every
    k-derivative from a five-point central difference with step ``hk``.
    """
    R, v = state.R_vec, state.velocity

    def parts(k):
        return (
            shifted_e(k, R, v, 0.0),
            shifted_m(k, R, v, 0.0),
            lag_density_from_shift(shifted_e, k, R, v, h_rel),
            lag_density_from_shift(shifted_m, k, R, v, h_rel),
        )

    p0 = parts(1.0)
    p1, m1 = parts(1.0 + hk), parts(1.0 - hk)
    p2, m2 = parts(1.0 + 2 * hk), parts(1.0 - 2 * hk)
    d = [(8 * (a - b) - (c - e)) / (12 * hk) for a, b, c, e in zip(p1, m1, p2, m2)]
    G, Gm, dG, dGm = p0
    dy = [np.asarray(a)[None] for a in (G, Gm, d[0], d[1], dG, dGm, d[2], d[3])]
    return assemble_nonconservative(dy, state.coupling_numerator, state.delta,
                                     as_orientation(orientation))[0]
