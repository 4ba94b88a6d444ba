"""Independent numerical checks of the closed forms.

Each check returns an :class:`OracleReport` pairing a closed-form value with
an independently computed one.
"""
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad

METHODS = ("residue", "quadrature", "finite_difference", "monte_carlo", "plate_quadrature")
REL_FLOOR = 1e-300


def _jsonable(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


@dataclass
class OracleReport:
    """Closed form versus independent numerics."""

    closed_value: object
    numeric_value: object
    abs_error_estimate: float
    rel_deviation: float
    tolerance: float
    passed: bool
    method: str
    name: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return _jsonable(asdict(self))


def _norm(v):
    return float(np.max(np.abs(np.asarray(v, dtype=complex))))


def compare(closed, numeric, tol, method, error_estimate=0.0, name="", atol=1e-12,
            floor=REL_FLOOR, **details):
    """Build a report; deviations below ``atol`` count as zero.

    ``rel_deviation = max(|numeric - closed| - atol, 0) / max(|closed|, floor)``
    with the max-norm for arrays; the report passes when it is ``<= tol``.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    diff = _norm(np.asarray(numeric) - np.asarray(closed))
    rel = max(diff - atol, 0.0) / max(_norm(closed), floor)
    return OracleReport(closed, numeric, float(abs(error_estimate)), rel, tol,
                        bool(rel <= tol), method, name, details)


# --- frequency-plane integrals -------------------------------------------------


def lorentz_fourier(R, eta, sign, epsrel=1e-12):
    """Numerically evaluate ``exp(sign eta R) * int exp(i sign u R) / (u - i eta) du``.

    The integrand is folded onto ``u > 0``; the Lorentzian core is handled
    by adaptive quadrature with breakpoints and the oscillatory tail by
    Fourier-weighted quadrature.

    Returns
    -------
    value : complex
    error : float
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    u1 = max(200.0 * eta, 40.0 * np.pi / R)

    def core(u):
        return (eta * np.cos(u * R) + sign * u * np.sin(u * R)) / (u * u + eta * eta)

    # Decade breakpoints: with only a few near the Lorentzian peak, the
    # adaptive rule can under-resolve the span up to u1 at small R and
    # still report a tiny error.
    pts = [p for p in eta * 10.0 ** np.arange(int(np.ceil(np.log10(u1 / eta)))) if p < u1]
    with warnings.catch_warnings():
        # the roundoff flag fires once the core is resolved to ~1e-13
        warnings.simplefilter("ignore", IntegrationWarning)
        a, ea = quad(core, 0.0, u1, points=pts or None, limit=2000, epsabs=0.0, epsrel=epsrel)
    b, eb = quad(lambda u: eta / (u * u + eta * eta), u1, np.inf, weight="cos", wvar=R,
                 limlst=200)
    c, ec = quad(lambda u: u / (u * u + eta * eta), u1, np.inf, weight="sin", wvar=R,
                 limlst=200)
    total = a + b + sign * c
    scale = np.exp(sign * eta * R)
    return 2j * total * scale, 2 * (ea + eb + ec) * scale


def simple_pole_integral(R, pole_re, eta):
    """``int exp(i k R) / (k - pole_re - i eta) dk`` by quadrature.

    The residue theorem gives ``2 pi i exp(i (pole_re + i eta) R)``.
    """
    J, err = lorentz_fourier(R, eta, +1)
    fac = np.exp(1j * pole_re * R - eta * R)
    return fac * J, abs(fac) * err


@dataclass(frozen=True)
class FreqIntegral:
    """Residue value and finite-eta quadrature of a frequency integral."""

    residue: complex
    at_eta: complex
    at_half_eta: complex
    extrapolated: complex
    error_estimate: float
    eta: float

    @property
    def deviation_ratio(self):
        """``|I(eta) - res| / |I(eta/2) - res|``; close to 2 for first-order convergence."""
        return abs(self.at_eta - self.residue) / max(abs(self.at_half_eta - self.residue), REL_FLOOR)


def _regularized(kernel, pole, eta, R):
    b = pole + 1j * eta
    Jp, ep = lorentz_fourier(R, eta, +1)
    Jm, em = lorentz_fourier(R, eta, -1)
    fb = b * b * kernel(b)
    fmb = b * b * kernel(-b)
    val = (fb * Jp - fmb * Jm) / 2j
    return val, (abs(fb) * ep + abs(fmb) * em) / 2


def freq_integral(kernel, pole, eta, distance):
    """``int k^2 Im{g(k)} / (k - pole - i eta) dk`` by residues and by quadrature.

    Parameters
    ----------
    kernel : callable
        ``g(k)`` for complex ``k``, of the form polynomial-in-1/k times
        ``exp(i k distance)`` with ``k^2 g(k)`` entire and ``g(-k) = conj g(k)``
        on the real axis.
    pole : float
        Resonance wavenumber.
    eta : float
        Adiabatic regularization (> 0).
    distance : float
        Exponent distance ``R`` in ``exp(i k R)``.

    Notes
    -----
    Writing ``k^2 g(k) = p(k) exp(i k R)``, the polynomial quotient of
    ``p(k)`` by ``k - pole - i eta`` integrates to zero against the
    exponential, leaving a single Lorentzian Fourier integral per term.
    Closure in the upper half plane gives ``pi pole^2 g(pole)``.
    """
    res = np.pi * pole**2 * kernel(pole + 0j)
    v1, e1 = _regularized(kernel, pole, eta, distance)
    v2, e2 = _regularized(kernel, pole, eta / 2, distance)
    return FreqIntegral(complex(res), complex(v1), complex(v2), complex(2 * v2 - v1),
                        float(e1 + 2 * e2), float(eta))


def _radial_kernels(R):
    """Scalar radial profiles of the electric (alpha, beta) and magnetic dyadics."""
    four_pi = 4 * np.pi

    def A(k):
        return np.exp(1j * k * R) / (four_pi * R)

    def B(k):
        return np.exp(1j * k * R) / four_pi * (1j / (k * R**2) - 1 / (k * k * R**3))

    def M(k):
        return np.exp(1j * k * R) / four_pi * (1 / R + 1j / (k * R**2))

    return A, B, M


def conservative_residue_report(x, eta=1e-4, tol=1e-3):
    """Check the Gm G frequency-integral product against its residue closed form.

    The closed form is ``2 pi^2 Re{M (A + B)}`` at ``k = 1``, where ``M`` is
    the magnetic profile and ``A + B`` the electric profile seen by the
    magnetic cross product.
    """
    A, B, M = _radial_kernels(x)
    IA = freq_integral(A, 1.0, eta, x)
    IB = freq_integral(B, 1.0, eta, x)
    IM = freq_integral(M, 1.0, eta, x)
    closed = 2 * np.pi**2 * np.real(M(1.0 + 0j) * (A(1.0 + 0j) + B(1.0 + 0j)))

    def prod(sel):
        return 2 * np.real(sel(IM) * (sel(IA) + sel(IB)))

    at_eta = prod(lambda f: f.at_eta)
    at_half = prod(lambda f: f.at_half_eta)
    extrap = 2 * at_half - at_eta
    ratio = abs(at_eta - closed) / max(abs(at_half - closed), REL_FLOOR)
    err = IA.error_estimate + IB.error_estimate + IM.error_estimate
    rep = compare(closed, extrap, tol, "residue", err, name=f"Gm.G frequency integral x={x:g}",
                  eta=eta, at_eta=at_eta, at_half_eta=at_half, eta_halving_ratio=ratio)
    return rep


def w_zero_residue_report(state, orientation=None, eta=1e-4, tol=1e-5):
    """Long-time rest energy from frequency quadrature versus the closed form."""
    from .vdw import channel_weights, w_zero

    x = state.x
    A, B, _ = _radial_kernels(x)
    IA = freq_integral(A, 1.0, eta, x)
    IB = freq_integral(B, 1.0, eta, x)
    w = channel_weights(state.r_hat[None], orientation)

    def wv(ch):
        return float(np.ravel(w[ch][0])[0])

    ia, ib = IA.extrapolated, IB.extrapolated
    numeric = 32 * state.coupling.value * np.real(
        ia * ia * wv("aa") + 2 * ia * ib * wv("ab") + ib * ib * wv("bb")
    )
    closed = w_zero(state, orientation)
    return compare(closed, numeric, tol, "quadrature", IA.error_estimate + IB.error_estimate,
                   name=f"rest energy residue x={x:g} rho={state.rho:g}")


# --- finite differences and linearity ----------------------------------------------


def finite_difference_gradient(energy, point, h):
    """Central-difference gradient with one Richardson step.

    Parameters
    ----------
    energy : callable
        Scalar function of a 3-vector.
    point : array_like, shape (3,)
    h : float
        Step size (> 0); the second evaluation uses ``h / 2``.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    p = np.asarray(point, dtype=float)

    def central(step):
        g = np.empty(p.size)
        for i in range(p.size):
            e = np.zeros_like(p)
            e[i] = step
            fp, fm = energy(p + e), energy(p - e)
            if not (np.isfinite(fp) and np.isfinite(fm)):
                raise FloatingPointError(f"non-finite energy sample near {p}")
            g[i] = (fp - fm) / (2 * step)
        return g

    return (4 * central(h / 2) - central(h)) / 3


def gradient_report(energy, point, analytic_force, h, tol=1e-6, name="", force_factor=-0.5):
    """Compare an analytic force with ``force_factor`` times an FD gradient."""
    fd = force_factor * finite_difference_gradient(energy, point, h)
    return compare(np.asarray(analytic_force), fd, tol, "finite_difference", name=name,
                   atol=0.0, h=h)


def linearity_check(quantity, betas, tol=1e-3, min_order=0.8, noise=1e-10, name=""):
    """Check that ``quantity(beta)`` is linear in ``beta`` at small ``beta``.

    ``q(beta)/beta`` is extrapolated to ``beta = 0`` by a polynomial through
    all samples (Richardson). The check passes when the residual at the
    smallest beta is within ``tol`` of the extrapolated slope and the
    residuals shrink at least like ``beta**min_order`` (residuals at the
    noise floor are exempt).
    """
    betas = np.asarray(betas, dtype=float)
    if betas.size < 2 or np.any(betas <= 0) or np.any(np.diff(betas) >= 0):
        raise ValueError("betas must be positive and strictly decreasing (>= 2 values)")
    q = np.array([quantity(b) for b in betas], dtype=float)
    if not np.all(np.isfinite(q)):
        raise FloatingPointError("non-finite quantity sample")
    r = q / betas
    coef = np.polyfit(betas, r, betas.size - 1)
    slope0 = float(coef[-1])
    resid = np.abs(r - slope0)
    scale = max(abs(slope0), REL_FLOOR)
    rel = resid / scale
    order = float("nan")
    ok_order = True
    if rel[-2] > noise and rel[-1] > noise:
        order = float(np.log(resid[-2] / resid[-1]) / np.log(betas[-2] / betas[-1]))
        ok_order = order >= min_order
    rel_dev = float(rel[-1])
    rep = OracleReport(slope0, float(r[-1]), float(resid[-1]), rel_dev, tol,
                       bool(rel_dev <= tol and ok_order and slope0 != 0),
                       "finite_difference", name,
                       {"betas": betas, "ratios": r, "residual_order": order})
    return rep


# --- leading-order extraction ------------------------------------------------------


def same_phase_points(x0, count=4, period=np.pi, growth=2.0):
    """Roughly geometric points ``x0 + m period`` sharing the phase of ``x0``."""
    pts = [x0]
    for j in range(1, count):
        m = round((growth**j - 1.0) * x0 / period)
        pts.append(x0 + m * period)
    return np.array(pts)


def leading_coefficient(fn, x0, count=4, power=2, period=np.pi, growth=2.0):
    """Leading large-x coefficient of ``fn`` at the phase of ``x0``.

    ``x**power * fn(x)`` is sampled at same-phase points and extrapolated to
    ``1/x -> 0`` with a polynomial in ``1/x``.

    Returns
    -------
    coefficient : float
    samples : ndarray
        The scaled samples, first one at ``x0``.
    """
    xs = same_phase_points(x0, count, period, growth)
    g = np.array([x**power * fn(x) for x in xs], dtype=float)
    coef = np.polyfit(1.0 / xs, g, count - 1)
    return float(coef[-1]), g


def monte_carlo_report(X, Y, n_samples=1_000_000, seed=0, sigmas=3.0):
    """Monte Carlo orientation average versus the isotropic trace formula."""
    from .dipole_avg import isotropic_contract, orientation_average_mc

    rng = np.random.default_rng(seed)
    mean, se = orientation_average_mc(X, Y, n_samples, rng)
    closed = complex(isotropic_contract(X, Y))
    scale = max(abs(closed), REL_FLOOR)
    rel = abs(mean - closed) / scale
    tol = sigmas * abs(se) / scale
    return OracleReport(closed, mean, abs(se), rel, tol, bool(rel <= tol),
                        "monte_carlo", "orientation average",
                        {"n_samples": n_samples, "sigmas": sigmas})
