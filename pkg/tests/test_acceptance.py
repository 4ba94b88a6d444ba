"""Acceptance criteria 1 to 10, each printing one pass/fail line.

Criterion 5's coefficient check is expected to fail; see the README.
"""
import itertools
import warnings

import numpy as np

from vdwfriction.errors import RegimeWarning
from vdwfriction.oracle import (
    conservative_residue_report,
    finite_difference_gradient,
    leading_coefficient,
    linearity_check,
)
from vdwfriction.plate import (
    PlateConfig,
    envelope,
    pair_roentgen_integrand,
    pair_vdw_integrand,
    plate_integrate,
    plate_roentgen_closed,
    plate_vdw_closed,
)
from vdwfriction.roentgen import roentgen_conservative, roentgen_nonconservative
from vdwfriction.vdw import (
    doppler_substitution,
    pair_state,
    state_at,
    vdw_force,
    vdw_force_asymptotic,
    velocity_energy,
    w_doppler,
    w_static,
    w_zero,
)

NEAR_RHOS = (0.95, 0.98, 1.02)
# Subleading Delta x terms of the far forms vanish as rho -> 1.
FAR_RHO = 1 - 1e-6


def plate(d, beta=1e-6, rho=0.98):
    return PlateConfig(d_red=d, sigma_red=1.0, beta=beta, rho=rho)


def quiet(fn, *args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        return fn(*args)


def test_criterion_1_near_field_law(acceptance):
    tols = {0.01: 5e-3, 0.03: 5e-2, 0.1: 5e-2}
    worst_law = {x: 0.0 for x in tols}
    worst_fd = 0.0
    for x, rho, b in itertools.product(tols, NEAR_RHOS, (1e-5, 1e-4)):
        s = pair_state(x, rho, b, r_hat=np.array([0.6, 0.0, 0.8]),
                       perp_hat=np.array([0.8, 0.0, -0.6]))
        F = vdw_force(s)
        law = vdw_force_asymptotic(s, "near")
        worst_law[x] = max(worst_law[x], np.linalg.norm(F - law) / np.linalg.norm(law))
        fd = -0.5 * finite_difference_gradient(lambda R: velocity_energy(state_at(s, R)),
                                               s.R_vec, 1e-5 * x)
        worst_fd = max(worst_fd, np.max(np.abs(F - fd)) / np.max(np.abs(F)))
    ok = all(worst_law[x] <= tols[x] for x in tols) and worst_fd <= 1e-6
    acceptance(1, ok, "law dev " + ", ".join(f"x={x}: {worst_law[x]:.2e} (tol {tols[x]:g})"
                                             for x in tols) + f"; fd dev {worst_fd:.2e} (tol 1e-06)")
    assert ok


def test_criterion_2_friction_sign(acceptance):
    bad = []
    for x, rho, b in itertools.product((0.01, 0.03, 0.1), (0.95, 0.98, 1.02, 1.05), (1e-5, -1e-5)):
        s = pair_state(x, rho, b)
        if not vdw_force(s) @ (s.beta_R * s.r_hat) < 0:
            bad.append((x, rho, b))
    acceptance(2, not bad, f"{len(bad)} sign violations over 24 states (tol 0)")
    assert not bad


def _far_nc(x, i, b_r=1e-6, b_p=1e-6):
    return roentgen_nonconservative(pair_state(x, FAR_RHO, b_r, b_p))[i]


def test_criterion_3_far_field_radial_equality(acceptance):
    devs, raws = [], []
    for x in (50.0, 100.0):
        s = pair_state(x, FAR_RHO, 1e-6, 1e-6)
        vdw_r = quiet(vdw_force_asymptotic, s, "far")[2]
        coef, _ = leading_coefficient(lambda t: _far_nc(t, 2), x)
        devs.append(abs(coef / (x**2 * vdw_r) - 1))
        raws.append(abs(_far_nc(x, 2) / vdw_r - 1))
    ok = max(devs) <= 1e-3
    acceptance(3, ok, f"leading-coefficient dev {max(devs):.2e} (tol 1e-03); "
                      f"raw dev at x=50,100: {raws[0]:.2e}, {raws[1]:.2e}")
    assert ok


def test_criterion_4_far_field_perpendicular_structure(acceptance):
    devs, raws = [], []
    for x in (50.0, 100.0):
        perp, _ = leading_coefficient(lambda t: _far_nc(t, 0) / 1e-6, x)
        radial, _ = leading_coefficient(lambda t: _far_nc(t, 2) / 1e-6, x)
        devs.append(abs(perp / radial + 0.5))
        raws.append(abs(_far_nc(x, 0) / _far_nc(x, 2) + 0.5))
    ok = max(devs) <= 1e-3
    acceptance(4, ok, f"ratio dev from -1/2 {max(devs):.2e} (tol 1e-03); "
                      f"raw dev at x=50,100: {raws[0]:.2e}, {raws[1]:.2e}")
    assert ok


def _odd_plate_vdw(d):
    up = plate_integrate(pair_vdw_integrand(plate(d)), plate(d), tol=1e-10)
    down = plate_integrate(pair_vdw_integrand(plate(d, -1e-6)), plate(d), tol=1e-10)
    return 0.5 * (up - down)


def test_criterion_5_plate_near_field(acceptance):
    F = _odd_plate_vdw(0.01)
    closed = plate_vdw_closed(plate(0.01), "near")[0]
    coef_dev = abs(F[0] / closed - 1)
    out_of_plane = abs(F[2]) / abs(F[0])
    ds = np.array([0.001, 0.01])
    fx = np.array([_odd_plate_vdw(d)[0] for d in ds])
    slope = np.polyfit(np.log(ds), np.log(-fx), 1)[0]
    coef_ok = coef_dev <= 1e-3
    slope_ok = abs(slope + 5) <= 0.01
    acceptance(5, coef_ok and slope_ok,
               f"coefficient ratio {F[0] / closed:.6f} dev {coef_dev:.2e} (tol 1e-03) "
               f"{'ok' if coef_ok else 'FAIL'}; slope {slope:.5f} (tol 0.01) "
               f"{'ok' if slope_ok else 'FAIL'}; out-of-plane {out_of_plane:.1e}")
    assert slope_ok
    assert coef_ok, "quadrature gives 8pi/7, three times the closed-form 8pi/21"


def test_criterion_6_plate_retarded(acceptance):
    devs = []
    for d in (30.0, 60.0):
        num = plate_integrate(pair_roentgen_integrand(plate(d)), plate(d))[0]
        devs.append(abs(num / plate_roentgen_closed(plate(d))[0] - 1))

    def nc(d):
        return plate_integrate(pair_roentgen_integrand(plate(d, rho=0.999)), plate(d, rho=0.999))[0]

    def vdw(d):
        return quiet(plate_vdw_closed, plate(d, rho=0.999), "far")[0]

    ratios = [envelope(nc, d) / envelope(vdw, d) for d in (30.0, 60.0)]
    growth_dev = abs(ratios[1] / ratios[0] / 2 - 1)
    ok = max(devs) <= 2e-2 and growth_dev <= 0.1
    acceptance(6, ok, f"closed-form dev d=30: {devs[0]:.2e}, d=60: {devs[1]:.2e} (tol 2e-02); "
                      f"ratio growth {ratios[1] / ratios[0]:.4f} vs 2, dev {growth_dev:.2e} (tol 0.1)")
    assert ok


def test_criterion_7_doppler_substitution(acceptance):
    rng = np.random.default_rng(20261018)
    worst_map = worst_scaled = 0.0
    for _ in range(100):
        x = 10 ** rng.uniform(-2, 2)
        rho = 1 + rng.choice([-1, 1]) * rng.uniform(0.01, 0.1)
        s = pair_state(x, rho, rng.uniform(-1e-3, 1e-3) * abs(1 - rho), rng.uniform(0, 1e-3))
        wd = w_doppler(s)
        p = doppler_substitution(s)
        worst_map = max(worst_map, abs(w_static(s.R_vec, **p) / wd - 1))
        # the rest-frame evaluator on a rescaled state gives the same energy
        kt = s.k_a_doppler
        rho2 = rho / kt
        s2 = pair_state(x * kt, rho2, coupling_numerator=p["coupling"] * (1 - rho2))
        worst_scaled = max(worst_scaled, abs(kt**6 * w_zero(s2) / wd - 1))
    ok = max(worst_map, worst_scaled) <= 1e-14
    acceptance(7, ok, f"map dev {worst_map:.1e}, rescaled rest-frame dev {worst_scaled:.1e} "
                      f"over 100 states (tol 1e-14)")
    assert ok


def test_criterion_8_negligibility_ratios(acceptance):
    rhos = np.concatenate([1 - np.geomspace(5e-3, 0.1, 5), 1 + np.geomspace(5e-3, 0.1, 5)])
    b = (1e-6, 1e-6)
    near_c = near_nc = far_c = 0.0
    for rho in rhos:
        for x in np.geomspace(0.01, 0.1, 10):
            s = pair_state(x, rho, *b)
            fv = np.linalg.norm(vdw_force(s))
            near_c = max(near_c, np.linalg.norm(roentgen_conservative(s)) / fv / (x**2 * abs(1 - rho)))
            near_nc = max(near_nc, np.linalg.norm(roentgen_nonconservative(s)) / fv / x**2)
        for x in np.geomspace(20, 200, 10):
            window = x + np.linspace(0, np.pi / 2, 9)
            fc = max(np.linalg.norm(roentgen_conservative(pair_state(t, rho, *b))) for t in window)
            fv = max(np.linalg.norm(vdw_force(pair_state(t, rho, *b))) for t in window)
            far_c = max(far_c, fc / fv / abs(1 - rho))
    ok = max(near_c, near_nc, far_c) <= 3
    acceptance(8, ok, f"max scaled ratios: near R-c {near_c:.2e}, near R-nc {near_nc:.2e}, "
                      f"far R-c {far_c:.2e} (bound 3)")
    assert ok


def test_criterion_9_linearity(acceptance):
    betas = [1e-5, 5e-6, 2.5e-6, 1.25e-6]
    lines, ok = [], True
    for x in (0.05, 1.0, 20.0):
        for axis, name in ((np.array([0.0, 0.0, 1.0]), "radial"), (np.array([1.0, 0.0, 0.0]), "perp")):
            def total(b, x=x, axis=axis):
                s = pair_state(x, 0.98, 0.6 * b, 0.8 * b)
                F = vdw_force(s) + roentgen_conservative(s) + roentgen_nonconservative(s)
                return float(F @ axis)

            rep = linearity_check(total, betas)
            ok &= rep.passed
            lines.append(f"x={x} {name} {rep.rel_deviation:.1e}")
    acceptance(9, ok, "residuals " + ", ".join(lines) + " (tol 1e-03)")
    assert ok


def test_criterion_10_frequency_integral(acceptance):
    devs, ratios = [], []
    for x in (0.5, 1.0, 5.0, 20.0):
        rep = conservative_residue_report(x, eta=1e-4, tol=1e-3)
        devs.append(rep.rel_deviation)
        ratios.append(rep.details["eta_halving_ratio"])
    order_ok = all(abs(r - 2) <= 0.05 for r in ratios)
    ok = max(devs) < 1e-3 and order_ok
    acceptance(10, ok, f"extrapolated dev {max(devs):.1e} (tol 1e-03); eta-halving ratios "
                       + ", ".join(f"{r:.4f}" for r in ratios) + " (first order: 2)")
    assert ok
