"""Atom-plate forces by pairwise summation over a dilute plate of B atoms.

The moving atom A sits at height ``d`` above the plane ``z = 0`` and moves
parallel to it. A plate atom at ``(x, y, 0)`` sees the separation
``R = (-x, -y, d)`` (A minus B).
"""
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError, RegimeWarning
from .roentgen import roentgen_nc_batch
from .vdw import X_FAR, X_NEAR, vdw_force_batch

X_HAT = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class PlateConfig:
    """Reduced plate geometry.

    Parameters
    ----------
    d_red : float
        Height ``k_A d``.
    sigma_red : float
        Surface density ``sigma / k_A^2``.
    beta : float
        Speed over c, parallel to the plate.
    rho : float
        ``k_B / k_A``.
    direction : ndarray
        Unit in-plane direction of motion.
    """

    d_red: float
    sigma_red: float
    beta: float
    rho: float
    coupling_numerator: float = 1.0
    direction: np.ndarray = field(default_factory=lambda: X_HAT.copy())
    T_red: Optional[float] = None
    gamma_A: float = 0.0
    gamma_B: float = 0.0

    def __post_init__(self):
        if not self.d_red > 0:
            raise DomainError("plate height must be positive")
        if self.sigma_red < 0:
            raise DomainError("surface density must be non-negative")
        if self.rho == 1:
            raise PoleError("rho = 1: zero detuning")
        u = np.asarray(self.direction, dtype=float)
        if abs(np.linalg.norm(u) - 1) > 1e-12 or abs(u[2]) > 1e-12:
            raise DomainError("direction must be a unit vector parallel to the plate")
        object.__setattr__(self, "direction", u)

    @property
    def delta(self):
        return 1.0 - self.rho

    @property
    def coupling(self):
        return self.coupling_numerator / self.delta

    @property
    def velocity(self):
        return self.beta * self.direction


def plate_vdw_closed(cfg, regime):
    """Pairwise-summed vdW plate force in the near or far field (reduced 3-vector)."""
    d, rho, dl, U = cfg.d_red, cfg.rho, cfg.delta, cfg.coupling
    if regime == "near":
        if d > X_NEAR:
            warnings.warn(f"near-field plate form at k_A d = {d:g}", RegimeWarning, stacklevel=2)
        mag = -(8 * np.pi / 21) * cfg.sigma_red * U * (1 + rho) / (dl * d**5)
    elif regime == "far":
        if d < X_FAR:
            warnings.warn(f"far-field plate form at k_A d = {d:g}", RegimeWarning, stacklevel=2)
        mag = -(2 * np.pi / 9) * cfg.sigma_red * U * rho / (dl * d**2) * (
            np.sin(2 * d) - 2 * dl * d * np.cos(2 * d)
        )
    else:
        raise ValueError(f"regime must be 'near' or 'far', got {regime!r}")
    return mag * cfg.velocity


def plate_roentgen_closed(cfg):
    """Pairwise-summed non-conservative Roentgen plate force in the far field."""
    d = cfg.d_red
    if d < X_FAR:
        warnings.warn(f"far-field plate form at k_A d = {d:g}", RegimeWarning, stacklevel=2)
    mag = -(2 * np.pi / 9) * cfg.sigma_red * cfg.coupling / (d * cfg.delta) * (
        np.cos(2 * d) + 2 * np.sin(2 * d) / d
    )
    return mag * cfg.velocity


# --- pair-force integrands ----------------------------------------------------


def _separations(x, y, d):
    return np.stack([-np.asarray(x), -np.asarray(y), np.full(np.shape(x), d)], axis=-1)


def pair_vdw_integrand(cfg, orientation=None, component="total"):
    """Pair vdW force as a function ``(x, y, d) -> (N, 3)`` for :func:`plate_integrate`."""

    def f(x, y, d):
        R = _separations(x, y, d)
        return vdw_force_batch(R, cfg.velocity, cfg.rho, cfg.coupling_numerator,
                               cfg.T_red, orientation)[component]

    return f


def pair_vdw_near_integrand(cfg):
    """Leading near-field pair force ``-20 U (1 + rho) beta_R / (Delta R^7) R_hat``."""

    def f(x, y, d):
        R = _separations(x, y, d)
        r = np.linalg.norm(R, axis=1)
        n = R / r[:, None]
        br = n @ cfg.velocity
        mag = -20 * cfg.coupling * (1 + cfg.rho) * br / (cfg.delta * r**7)
        return mag[:, None] * n

    return f


def pair_roentgen_integrand(cfg, orientation=None):
    """Pair non-conservative Roentgen force as a function ``(x, y, d) -> (N, 3)``."""

    def f(x, y, d):
        R = _separations(x, y, d)
        return roentgen_nc_batch(R, cfg.velocity, cfg.rho, cfg.coupling_numerator, orientation)

    return f


# --- quadrature ----------------------------------------------------------------


def wynn_epsilon(S):
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Parameters
    ----------
    S : array_like, shape (n, ...)
        Partial sums; trailing axes are extrapolated independently.

    Returns
    -------
    estimate : ndarray
        Highest-order even column entry.
    error : ndarray
        Difference to the previous even-column estimate.
    """
    S = np.asarray(S, dtype=float)
    n = S.shape[0]
    prev = np.zeros((n + 1,) + S.shape[1:])
    cur = S.copy()
    best, last = S[-1], S[-2] if n > 1 else S[-1]
    col = 0
    while cur.shape[0] > 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            diff = cur[1:] - cur[:-1]
            nxt = prev[1:cur.shape[0]] + np.where(diff != 0, 1.0 / diff, np.inf)
        col += 1
        prev, cur = cur, nxt
        if col % 2 == 0:
            cand = cur[-1]
            if not np.all(np.isfinite(cand)):
                break
            last, best = best, cand
    return best, np.abs(best - last)


@dataclass(frozen=True)
class PlateQuadrature:
    value: np.ndarray
    error_estimate: float
    panels: int


def plate_integrate(pair_force, cfg, tol=1e-6, n_azimuth=16, gl_order=24,
                    max_panels=20000, batch=20, atol=0.0, full_output=False):
    """Integrate a pair force over the plate, ``sigma * int dx dy F(x, y, d)``.

    Polar coordinates about the foot point are used with ``s ds = R dR``.
    The azimuth is integrated with the periodic trapezoid rule (exact for
    the low-order trigonometric dependence of linear-in-velocity forces).
    The radial integral uses Gauss-Legendre panels: geometric panels from
    ``R = d`` while the integrand is smooth and non-oscillatory, then
    quarter-wavelength panels between zeros of ``sin(2R)`` whose partial
    sums are accelerated with Wynn's epsilon algorithm.

    Parameters
    ----------
    pair_force : callable
        ``pair_force(x, y, d)`` taking arrays ``x``, ``y`` of equal shape
        ``(N,)`` and returning forces of shape ``(N, m)``; ``m = 3`` for a
        single force, larger for stacked components.
    cfg : PlateConfig
    tol : float
        Relative tolerance on the extrapolated tail.

    Raises
    ------
    ConvergenceError
        If the tail does not settle within ``max_panels`` panels.
    """
    d = cfg.d_red
    phi = 2 * np.pi * (np.arange(n_azimuth) + 0.5) / n_azimuth
    cphi, sphi = np.cos(phi), np.sin(phi)
    w_phi = 2 * np.pi / n_azimuth
    gx, gw = np.polynomial.legendre.leggauss(gl_order)

    def panels(edges):
        a, b = edges[:-1], edges[1:]
        half = 0.5 * (b - a)
        R = (0.5 * (a + b))[:, None] + half[:, None] * gx
        W = half[:, None] * gw
        s = np.sqrt(np.maximum(R * R - d * d, 0.0))
        xs = (s[..., None] * cphi).ravel()
        ys = (s[..., None] * sphi).ravel()
        F = np.asarray(pair_force(xs, ys, d)).reshape(R.shape + (n_azimuth, -1))
        per_panel = np.einsum("prk,pr,pr->pk", F.sum(axis=2), W, R) * w_phi
        return per_panel

    # Smooth near region.
    quarter = np.pi / 2
    r_switch = max(d, np.pi)
    edges = [d]
    while edges[-1] * 2 < r_switch:
        edges.append(edges[-1] * 2)
    z0 = np.ceil(r_switch / quarter) * quarter
    if z0 <= edges[-1]:
        z0 += quarter
    edges.append(z0)
    head = panels(np.array(edges)).sum(axis=0)

    # Oscillatory tail.
    partial = [np.zeros_like(head)]
    total_panels = len(edges) - 1
    start = z0
    est_prev = None
    settled = 0
    err = np.inf
    est = np.zeros_like(head)
    while total_panels < max_panels:
        e = start + quarter * np.arange(batch + 1)
        contrib = panels(e)
        for c in contrib:
            partial.append(partial[-1] + c)
        total_panels += batch
        start = e[-1]
        window = np.array(partial[-min(len(partial), 41):])
        est, werr = wynn_epsilon(window)
        scale = max(np.max(np.abs(head + est)), atol / max(tol, 1e-300))
        err = float(np.max(werr))
        if est_prev is not None:
            err = max(err, float(np.max(np.abs(est - est_prev))))
        est_prev = est
        if err <= tol * scale:
            settled += 1
            if settled >= 2:
                value = cfg.sigma_red * (head + est)
                if full_output:
                    return PlateQuadrature(value, cfg.sigma_red * err, total_panels)
                return value
        else:
            settled = 0
    raise ConvergenceError(
        f"plate tail not converged after {total_panels} panels",
        value=cfg.sigma_red * (head + est), error_estimate=cfg.sigma_red * err,
    )


def envelope(fn, d, offset=np.pi / 4):
    """Envelope ``sqrt(f(d)^2 + f(d + offset)^2)`` of a ``sin/cos(2d)`` oscillation."""
    return float(np.hypot(fn(d), fn(d + offset)))
