"""Velocity-dependent van der Waals energies and forces of an atom pair.

Every energy here is a sum over three orientation channels,

    W = w_bb(n) S_bb(R) + w_ab(n) S_ab(R) + w_aa(n) S_aa(R),

where ``w_XY`` is the four-dipole contraction of the projector pair
(``beta beta``, ``alpha beta``, ``alpha alpha``) and ``S_XY`` is a short sum
of radial terms ``c R^p trig(f R + phase)``. Radial derivatives are
analytic, so forces are exact gradients of the closed forms.

Energies are in units of ``k_A^6`` times the coupling scalar's units and
forces in units of ``k_A^7`` (reduced units, ``k_A = c = 1``). Forces are
gradients at fixed radial and perpendicular velocity components.
"""
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dipole_avg import as_orientation
from .errors import DomainError, PoleError, RegimeWarning
from .state import PairState

X_NEAR = 0.1
X_FAR = 10.0

MODES = ("time_averaged", "instantaneous")
CHANNELS = ("bb", "ab", "aa")
ISO_WEIGHTS = {"bb": 6.0 / 9.0, "ab": 2.0 / 9.0, "aa": 2.0 / 9.0}


class Term(NamedTuple):
    """``coef * R**power * (sin if is_sin else cos)(freq * R + phase)``."""

    coef: object
    power: int
    freq: object
    phase: object
    is_sin: bool


def _eval_terms(terms, r):
    """Value and radial derivative of a list of terms at radii ``r``."""
    val = np.zeros_like(r)
    der = np.zeros_like(r)
    for t in terms:
        arg = t.freq * r + t.phase
        s, c = np.sin(arg), np.cos(arg)
        rp = r**t.power
        if t.is_sin:
            val = val + t.coef * rp * s
            der = der + t.coef * (t.power * rp / r * s + rp * t.freq * c)
        else:
            val = val + t.coef * rp * c
            der = der + t.coef * (t.power * rp / r * c - rp * t.freq * s)
    return val, der


def static_terms(k_a, k_b, coupling, phase=None):
    """Radial terms of the static-form energy.

    Parameters
    ----------
    k_a, k_b : float or ndarray
        Wavenumbers of atoms A and B.
    coupling : float or ndarray
        Coupling scalar.
    phase : float, ndarray or None
        Detuning times observation time for the slowly rotating terms;
        ``None`` drops them (time average).
    """
    U = coupling
    bb = [
        Term(2 * U, -6, 2 * k_a, 0.0, False),
        Term(-2 * U * k_a**2, -4, 2 * k_a, 0.0, False),
        Term(4 * U * k_a, -5, 2 * k_a, 0.0, True),
    ]
    ab = [
        Term(-4 * U * k_a**2, -4, 2 * k_a, 0.0, False),
        Term(-4 * U * k_a**3, -3, 2 * k_a, 0.0, True),
    ]
    aa = [Term(2 * U * k_a**4, -2, 2 * k_a, 0.0, False)]
    if phase is not None:
        bb += [
            Term(-2 * U, -6, 2 * k_b, phase, False),
            Term(2 * U * k_b**2, -4, 2 * k_b, phase, False),
            Term(-4 * U * k_b, -5, 2 * k_b, phase, True),
        ]
        ab += [
            Term(4 * U * k_b**2, -4, 2 * k_b, phase, False),
            Term(4 * U * k_b**3, -3, 2 * k_b, phase, True),
        ]
        aa += [Term(-2 * U * k_b**4, -2, 2 * k_b, phase, False)]
    return {"bb": bb, "ab": ab, "aa": aa}


def theta_terms(k_b, coupling, delta, beta_R):
    """Radial terms of the causality-boundary energy (linear in ``beta_R``)."""
    C = 2 * coupling * delta * beta_R
    return {
        "bb": [
            Term(C, -5, 2.0, 0.0, True),
            Term(-C * k_b**2, -3, 2.0, 0.0, True),
            Term(-2 * C * k_b, -4, 2.0, 0.0, False),
        ],
        "ab": [
            Term(-2 * C * k_b**2, -3, 2.0, 0.0, True),
            Term(2 * C * k_b**3, -2, 2.0, 0.0, False),
        ],
        "aa": [Term(C * k_b**4, -1, 2.0, 0.0, True)],
    }


def lag_terms(coupling, delta, beta_R):
    """Radial terms of the lag energy (linear in ``beta_R``)."""
    L = 2 * coupling * beta_R / delta
    LD = L * delta
    return {
        "bb": [
            Term(6 * LD, -6, 2.0, 0.0, False),
            Term(-3 * L, -7, 2.0, 0.0, True),
            Term(4 * LD, -4, 2.0, 0.0, False),
            Term(-2 * L, -5, 2.0, 0.0, True),
            Term(-10 * LD, -5, 2.0, 0.0, True),
            Term(-5 * L, -6, 2.0, 0.0, False),
        ],
        "ab": [
            Term(8 * LD, -4, 2.0, 0.0, False),
            Term(-4 * L, -5, 2.0, 0.0, True),
            Term(6 * LD, -3, 2.0, 0.0, True),
            Term(3 * L, -4, 2.0, 0.0, False),
        ],
        "aa": [
            Term(2 * LD, -2, 2.0, 0.0, False),
            Term(-L, -3, 2.0, 0.0, True),
        ],
    }


def _negate(channels):
    return {ch: [t._replace(coef=-t.coef) for t in ts] for ch, ts in channels.items()}


def _merge(*parts):
    return {ch: [t for p in parts for t in p[ch]] for ch in CHANNELS}


def channel_weights(n, orientation):
    """Channel contractions and their gradients with respect to R (at |R| = 1).

    Returns a dict ``ch -> (w, dw_dn)`` where ``dw_dn`` has shape ``(N, 3)``
    or is ``None`` for the isotropic average (constant weights).
    """
    orientation = as_orientation(orientation)
    if orientation is None:
        return {ch: (ISO_WEIGHTS[ch], None) for ch in CHANNELS}
    a, b = orientation.mu_a, orientation.mu_b
    an = n @ a
    bn = n @ b
    ab = a @ b
    P = ab - an * bn
    Q = ab - 3 * an * bn
    g = -(np.outer(bn, a) + np.outer(an, b))
    return {
        "bb": (Q * Q, (6 * Q)[:, None] * g),
        "ab": (P * Q, (Q + 3 * P)[:, None] * g),
        "aa": (P * P, (2 * P)[:, None] * g),
    }


def evaluate_channels(channels, R, orientation=None):
    """Energy and gradient of a channel-term dict at separations ``R`` (N, 3)."""
    R = np.asarray(R, dtype=float).reshape(-1, 3)
    r = np.linalg.norm(R, axis=1)
    n = R / r[:, None]
    weights = channel_weights(n, orientation)
    energy = np.zeros_like(r)
    grad = np.zeros_like(R)
    for ch in CHANNELS:
        val, der = _eval_terms(channels[ch], r)
        w, dw_dn = weights[ch]
        energy = energy + w * val
        grad = grad + (w * der)[:, None] * n
        if dw_dn is not None:
            tang = dw_dn - np.einsum("ni,ni->n", dw_dn, n)[:, None] * n
            grad = grad + (val / r)[:, None] * tang
    return energy, grad


# --- pair-state front end -------------------------------------------------


def _check_mode(mode, state):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == "instantaneous":
        if state.T_red is None:
            raise DomainError("instantaneous mode needs an observation time T_red")
        state.require_causal()


def _phase(delta, state, mode):
    return delta * state.T_red if mode == "instantaneous" else None


def doppler_substitution(state, mode="time_averaged"):
    """Parameters of the static form after the Doppler substitution.

    Returns
    -------
    dict
        ``k_a`` (shifted wavenumber of A), ``k_b`` (unchanged), ``coupling``
        (numerator over the shifted detuning) and ``phase`` (shifted
        detuning times T, or ``None`` when time averaged).
    """
    _check_mode(mode, state)
    state.require_detuning()
    d = state.delta_doppler
    return {
        "k_a": state.k_a_doppler,
        "k_b": state.rho,
        "coupling": state.coupling_numerator / d,
        "phase": _phase(d, state, mode),
    }


def zero_velocity_params(state, mode="time_averaged"):
    """Parameters of the static form for the atoms at rest."""
    _check_mode(mode, state)
    state.require_detuning()
    return {
        "k_a": 1.0,
        "k_b": state.rho,
        "coupling": state.coupling.value,
        "phase": _phase(state.delta, state, mode),
    }


def w_static(R_vec, k_a, k_b, coupling, phase=None, orientation=None):
    """Static-form interaction energy for explicit wavenumbers and coupling."""
    ch = static_terms(k_a, k_b, coupling, phase)
    e, _ = evaluate_channels(ch, R_vec, orientation)
    return float(e[0])


def w_zero(state, orientation=None, mode="time_averaged"):
    """Interaction energy of the pair at rest."""
    return w_static(state.R_vec, **zero_velocity_params(state, mode), orientation=orientation)


def w_doppler(state, orientation=None, mode="time_averaged"):
    """Doppler part: the rest-frame form with shifted ``k_A``, detuning and coupling."""
    return w_static(state.R_vec, **doppler_substitution(state, mode), orientation=orientation)


def w_theta(state, orientation=None):
    """Energy from the moving causality boundary; proportional to ``beta_R``."""
    state.require_causal()
    state.require_detuning()
    ch = theta_terms(state.rho, state.coupling.value, state.delta, state.beta_R)
    return float(evaluate_channels(ch, state.R_vec, orientation)[0][0])


def w_lag(state, orientation=None):
    """Energy from the emission-absorption lag; proportional to ``beta_R``."""
    state.require_detuning()
    ch = lag_terms(state.coupling.value, state.delta, state.beta_R)
    return float(evaluate_channels(ch, state.R_vec, orientation)[0][0])


@dataclass(frozen=True)
class EnergyBreakdown:
    """Interaction energies in reduced units."""

    w_zero: float
    w_theta: float
    w_dop: float
    w_lag: float
    time_averaged: bool

    @property
    def velocity_dependent(self):
        return self.w_dop - self.w_zero + self.w_theta + self.w_lag


def energy_breakdown(state, orientation=None, mode="time_averaged"):
    return EnergyBreakdown(
        w_zero=w_zero(state, orientation, mode),
        w_theta=w_theta(state, orientation),
        w_dop=w_doppler(state, orientation, mode),
        w_lag=w_lag(state, orientation),
        time_averaged=mode == "time_averaged",
    )


def velocity_energy(state, orientation=None, mode="time_averaged"):
    """``W_dop - W_0 + W_theta + W_lag``, the potential of the velocity-dependent force."""
    return energy_breakdown(state, orientation, mode).velocity_dependent


# --- batched forces ---------------------------------------------------------


def component_channels(r_beta, rho, numerator=1.0, T_red=None):
    """Channel terms of each velocity-dependent energy for arrays of radial velocities.

    Parameters
    ----------
    r_beta : ndarray, shape (N,)
        Radial velocities.
    rho : float
    numerator : float
    T_red : float or None
        Observation time; ``None`` selects the time average.

    Returns
    -------
    dict
        ``doppler``, ``theta`` and ``lag`` channel-term dicts.
    """
    delta = 1.0 - rho
    if delta == 0:
        raise PoleError("rho = 1: zero detuning")
    d_dop = delta - rho * r_beta
    if np.any(d_dop == 0):
        raise PoleError("Doppler shift closes the detuning")
    U = numerator / delta
    ph0 = None if T_red is None else delta * T_red
    ph1 = None if T_red is None else d_dop * T_red
    dop = _merge(
        static_terms(1.0 - r_beta, rho, numerator / d_dop, ph1),
        _negate(static_terms(1.0, rho, U, ph0)),
    )
    return {
        "doppler": dop,
        "theta": theta_terms(rho, U, delta, r_beta),
        "lag": lag_terms(U, delta, r_beta),
    }


def vdw_force_batch(R, velocity, rho, numerator=1.0, T_red=None, orientation=None):
    """Velocity-dependent vdW force for many separations at once.

    Parameters
    ----------
    R : ndarray, shape (N, 3)
        Separations (atom A minus atom B).
    velocity : array_like, shape (3,) or (N, 3)
        Velocity of A relative to B in units of c.

    Returns
    -------
    dict
        Force arrays of shape ``(N, 3)`` keyed by ``doppler``, ``theta``,
        ``lag`` and ``total``.
    """
    R = np.asarray(R, dtype=float).reshape(-1, 3)
    r = np.linalg.norm(R, axis=1)
    n = R / r[:, None]
    v = np.broadcast_to(np.asarray(velocity, dtype=float), R.shape)
    r_beta = np.einsum("ni,ni->n", v, n)
    if T_red is not None and np.any(T_red * (1 + r_beta) <= 2 * r):
        from .errors import CausalityError

        raise CausalityError("observation time shorter than the photon round trip")
    out = {}
    total = np.zeros_like(R)
    for name, ch in component_channels(r_beta, rho, numerator, T_red).items():
        _, grad = evaluate_channels(ch, R, orientation)
        out[name] = -0.5 * grad
        if name == "doppler":
            # Shifted and rest energies coincide at beta_R = 0; drop the rounding residue.
            out[name][r_beta == 0] = 0.0
        total = total + out[name]
    out["total"] = total
    return out


def vdw_force_components(state, orientation=None, mode="time_averaged"):
    """Force split into Doppler, causality-boundary and lag parts, each a 3-vector."""
    _check_mode(mode, state)
    state.require_detuning()
    state.require_causal()
    T = state.T_red if mode == "instantaneous" else None
    parts = vdw_force_batch(state.R_vec, state.velocity, state.rho,
                            state.coupling_numerator, T, orientation)
    return {k: v[0] for k, v in parts.items()}


def vdw_force(state, orientation=None, mode="time_averaged"):
    """Velocity-dependent vdW force on atom A (reduced 3-vector)."""
    return vdw_force_components(state, orientation, mode)["total"]


def regime_label(x):
    """``near``, ``cross`` or ``far`` by the reduced separation."""
    if x <= X_NEAR:
        return "near"
    if x >= X_FAR:
        return "far"
    return "cross"


def vdw_force_asymptotic(state, regime):
    """Leading near- or far-field vdW force for isotropic dipoles.

    Evaluates anywhere; warns with :class:`RegimeWarning` outside the regime.
    """
    state.require_detuning()
    x, rho, d = state.x, state.rho, state.delta
    U = state.coupling.value
    if regime == "near":
        if x > X_NEAR:
            warnings.warn(f"near-field form at x = {x:g} > {X_NEAR}", RegimeWarning, stacklevel=2)
        mag = -20.0 * U * (1.0 + rho) * state.beta_R / (d * x**7)
    elif regime == "far":
        if x < X_FAR:
            warnings.warn(f"far-field form at x = {x:g} < {X_FAR}", RegimeWarning, stacklevel=2)
        mag = (4.0 * U / (9.0 * x**2)) * (rho / d) * state.beta_R * (
            np.sin(2 * x) - 2 * d * x * np.cos(2 * x)
        )
    else:
        raise ValueError(f"regime must be 'near' or 'far', got {regime!r}")
    return mag * state.r_hat


def state_at(state, R_vec):
    """Copy of ``state`` moved to ``R_vec`` with the same radial/perpendicular speeds."""
    R_vec = np.asarray(R_vec, dtype=float)
    x = float(np.linalg.norm(R_vec))
    n = R_vec / x
    p = state.perp_hat - (state.perp_hat @ n) * n
    norm = np.linalg.norm(p)
    if norm < 1e-12:
        p = state.r_hat - (state.r_hat @ n) * n
        norm = np.linalg.norm(p)
    return state.with_(x=x, r_hat=n, perp_hat=p / norm)


def pair_state(x, rho, beta_R=0.0, beta_perp=0.0, **kw):
    """Convenience constructor with default axes (separation along z)."""
    return PairState(x=x, rho=rho, beta_R=beta_R, beta_perp=beta_perp, **kw)
