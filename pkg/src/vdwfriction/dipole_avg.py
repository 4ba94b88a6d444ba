"""Dipole-orientation contractions of dyadic pairs.

The four-dipole pattern ``X^{ij} Y^{pq} a_i b_j b_p a_q`` (``a`` the unit
dipole of atom A, ``b`` that of atom B) is either evaluated for fixed
directions or averaged over independent uniform orientations of ``a`` and
``b``, which replaces it by ``Tr(X Y) / 9``.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import PoleError
from .greens import check_unit


@dataclass(frozen=True)
class CouplingU:
    """Signed coupling scalar ``numerator / detuning`` in reduced units.

    Parameters
    ----------
    numerator : float
        Positive dipole-strength factor (1 in reduced units).
    delta : float
        Reduced detuning ``1 - rho`` (or its Doppler-shifted value).
    """

    numerator: float
    delta: float

    def __post_init__(self):
        if self.delta == 0:
            raise PoleError("zero detuning: coupling scalar diverges")
        if self.numerator <= 0:
            raise ValueError("coupling numerator must be positive")

    @property
    def value(self):
        return self.numerator / self.delta

    @property
    def sign(self):
        return 1 if self.delta > 0 else -1


@dataclass(frozen=True)
class FixedOrientation:
    """Fixed unit dipole directions of atoms A and B."""

    mu_a: np.ndarray
    mu_b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu_a", check_unit(self.mu_a, "mu_a"))
        object.__setattr__(self, "mu_b", check_unit(self.mu_b, "mu_b"))


def as_orientation(orientation):
    """Normalize an orientation argument: ``None`` (isotropic), a pair, or FixedOrientation."""
    if orientation is None or isinstance(orientation, FixedOrientation):
        return orientation
    mu_a, mu_b = orientation
    return FixedOrientation(mu_a, mu_b)


def isotropic_contract(X, Y):
    """Orientation average ``Tr(X Y) / 9``."""
    return np.trace(np.asarray(X) @ np.asarray(Y)) / 9.0


def fixed_orientation_contract(X, Y, muA_hat, muB_hat):
    """``(a . X . b)(b . Y . a)`` for unit dipole directions ``a``, ``b``."""
    a = check_unit(muA_hat, "muA_hat")
    b = check_unit(muB_hat, "muB_hat")
    return complex(kernels.fixed_contract(X, Y, a, b)[0])


def random_unit_vectors(n, rng):
    """``n`` directions uniformly distributed on the sphere."""
    u = rng.standard_normal((n, 3))
    return u / np.linalg.norm(u, axis=1)[:, None]


def orientation_average_mc(X, Y, n_samples, rng, chunk=200_000):
    """Monte Carlo average of the fixed-orientation contraction.

    Parameters
    ----------
    X, Y : array_like, shape (3, 3)
        Dyadics to contract.
    n_samples : int
        Number of independent (a, b) orientation pairs.
    rng : numpy.random.Generator
        Source of randomness.
    chunk : int, optional
        Samples drawn per batch.

    Returns
    -------
    mean : complex
        Sample mean.
    stderr : complex
        Standard error of the real and imaginary parts, packed as a complex number.
    """
    X = np.ascontiguousarray(X, dtype=complex)
    Y = np.ascontiguousarray(Y, dtype=complex)
    s1 = 0j
    s2r = s2i = 0.0
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        a = random_unit_vectors(m, rng)
        b = random_unit_vectors(m, rng)
        vals = kernels.fixed_contract(X, Y, a, b)
        s1 += vals.sum()
        s2r += np.sum(vals.real**2)
        s2i += np.sum(vals.imag**2)
        done += m
    mean = s1 / n_samples
    var_r = max(s2r / n_samples - mean.real**2, 0.0)
    var_i = max(s2i / n_samples - mean.imag**2, 0.0)
    stderr = complex(np.sqrt(var_r / n_samples), np.sqrt(var_i / n_samples))
    return mean, stderr
