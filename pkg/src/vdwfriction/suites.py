"""Named oracle suites run by the ``verify`` subcommand."""
import warnings

import numpy as np

from .config import SUITES
from .dipole_avg import FixedOrientation
from .errors import ConfigError, RegimeWarning
from .greens import green_electric
from .oracle import (
    compare,
    conservative_residue_report,
    gradient_report,
    linearity_check,
    monte_carlo_report,
    w_zero_residue_report,
)
from .plate import (
    PlateConfig,
    pair_roentgen_integrand,
    pair_vdw_integrand,
    plate_integrate,
    plate_roentgen_closed,
    plate_vdw_closed,
)
from .roentgen import conservative_potential, roentgen_conservative
from .vdw import pair_state, state_at, velocity_energy, vdw_force

DEFAULT_RHO = 0.98
DEFAULT_BETA = (1e-4, 5e-5)
GRADIENT_XS = (0.05, 1.0, 20.0)
LINEARITY_BETAS = (1e-5, 5e-6, 2.5e-6, 1.25e-6)
FIXED = FixedOrientation(np.array([0.6, 0.0, 0.8]), np.array([0.8, 0.0, 0.6]))


def parse_suites(text):
    """Split a comma list of suite tags, rejecting unknown or empty sets."""
    tags = tuple(t.strip() for t in text.split(",") if t.strip()) if text else ()
    if not tags:
        raise ConfigError(f"empty suite set; choose from {SUITES}")
    unknown = [t for t in tags if t not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite tags {unknown}; choose from {SUITES}")
    return tags


def _fd_step(x):
    return 1e-3 * x


def gradient_suite(state):
    """Analytic forces versus finite-difference gradients of the energies."""
    out = []
    for orientation in (None, FIXED):
        label = "isotropic" if orientation is None else "fixed"
        rep = gradient_report(
            lambda R: velocity_energy(state_at(state, R), orientation),
            state.R_vec, vdw_force(state, orientation), _fd_step(state.x),
            name=f"vdW force gradient x={state.x:g} {label}",
        )
        out.append(rep)
        out.append(gradient_report(
            lambda R: conservative_potential(
                state.from_vectors(R, state.velocity, state.rho), orientation),
            state.R_vec, roentgen_conservative(state, orientation), _fd_step(state.x),
            name=f"Roentgen conservative gradient x={state.x:g} {label}", force_factor=-1.0,
        ))
    return out


def residue_suite(state):
    """Frequency-plane quadrature versus residue closed forms."""
    return [
        conservative_residue_report(state.x),
        w_zero_residue_report(state),
        w_zero_residue_report(state, FIXED),
    ]


def linearity_suite(state):
    """Total velocity-dependent radial force is linear in the radial speed."""
    betas = np.array(LINEARITY_BETAS)

    def radial(b):
        s = state.with_(beta_R=b, beta_perp=0.0)
        return float(vdw_force(s) @ s.r_hat)

    return [linearity_check(radial, betas, name=f"linearity x={state.x:g}")]


def plate_suite(plate=None):
    """Plate quadrature versus the closed plate forms (near vdW, far Roentgen)."""
    out = []
    near = plate or PlateConfig(d_red=0.01, sigma_red=1.0, beta=1e-6, rho=DEFAULT_RHO)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        if near.d_red <= 0.1:
            q = plate_integrate(pair_vdw_integrand(near), near, full_output=True)
            closed = plate_vdw_closed(near, "near")
            out.append(compare(closed[0], q.value[0], 1e-3, "plate_quadrature", q.error_estimate,
                               name=f"plate near-field vdW d={near.d_red:g}", atol=0.0))
        far = near if near.d_red >= 10 else PlateConfig(
            d_red=30.0, sigma_red=near.sigma_red, beta=near.beta or 1e-6, rho=near.rho)
        q = plate_integrate(pair_roentgen_integrand(far), far, full_output=True)
        closed = plate_roentgen_closed(far)
        out.append(compare(closed[0], q.value[0], 2e-2, "plate_quadrature", q.error_estimate,
                           name=f"plate far-field Roentgen d={far.d_red:g}", atol=0.0))
    return out


def orientation_suite(state, n_samples=400_000, seed=0):
    """Monte Carlo dipole averages versus the isotropic trace formula."""
    G = green_electric(1.0, state.R_vec)
    G2 = green_electric(1.0, state.R_vec + np.array([0.3 * state.x, 0.0, 0.0]))
    return [monte_carlo_report(G, G, n_samples, seed), monte_carlo_report(G, G2, n_samples, seed + 1)]


def default_states():
    return [pair_state(x, DEFAULT_RHO, *DEFAULT_BETA) for x in GRADIENT_XS]


def run_suites(tags, states=None, plate=None):
    """Yield oracle reports for each suite tag, in order.

    Parameters
    ----------
    tags : sequence of str
        Subset of :data:`vdwfriction.config.SUITES`.
    states : list of PairState, optional
        Pair states; defaults to ``x`` in 0.05, 1 and 20 at ``rho = 0.98``.
    plate : PlateConfig, optional
        Plate geometry for the ``plate`` suite.
    """
    states = states or default_states()
    for tag in tags:
        if tag == "gradients":
            for s in states:
                yield from gradient_suite(s)
        elif tag == "residues":
            for s in states:
                yield from residue_suite(s)
        elif tag == "linearity":
            for s in states:
                yield from linearity_suite(s)
        elif tag == "plate":
            yield from plate_suite(plate)
        elif tag == "orientation":
            yield from orientation_suite(states[0])
        else:
            raise ConfigError(f"unknown suite tag {tag!r}")
