import math
from fractions import Fraction

import numpy as np
import pytest

from hjburgers.action import InitialData, build_reduced_action
from hjburgers.geometry import (
    SingularParameterError,
    caustic_deflation,
    compute_caustic,
    double_point_set_gcd,
    hot_cool,
    hot_cool_boundary,
    level_surface,
    pre_level_surface,
    preparam_matches_flow_image,
)
from hjburgers.polyalg import Polynomial, poly, radical, substitute_ratfuncs


@pytest.fixture(scope="module")
def cusp():
    ra = build_reduced_action(InitialData(2, poly("1/2*x0^2*y0")))
    return ra, compute_caustic(ra)


@pytest.fixture(scope="module")
def swallowtail():
    ra = build_reduced_action(
        InitialData(2, poly("x0^5 + x0^2*y0"), noise_direction=(1, 0))
    )
    return ra, compute_caustic(ra)


@pytest.fixture(scope="module")
def swallowtail3d():
    ra = build_reduced_action(
        InitialData(3, poly("x0^7 + x0^3*y0 + x0^2*z0"), noise_direction=(0, 0, 0))
    )
    return ra, compute_caustic(ra)


def test_generic_cusp_preparam_exact(cusp):
    ra, ca = cusp
    lam, t = poly("lam"), poly("t")
    assert ca.preparam[0] == t * t * lam**3
    # y coordinate: (3/2) t lam^2 - 1/t as an exact rational function
    assert ca.preparam[1] * t == Fraction(3, 2) * t * t * lam * lam - 1


def test_preparam_is_flow_image_of_precaustic(cusp, swallowtail):
    for ra, ca in (cusp, swallowtail):
        assert preparam_matches_flow_image(ca)


def test_critical_identities_on_caustic(cusp, swallowtail, swallowtail3d):
    # f' and f'' vanish identically along the pre-parameterisation
    for ra, ca in (cusp, swallowtail, swallowtail3d):
        assign = {v: c for v, c in zip(ra.data.space(), ca.preparam)}
        lam = Polynomial.variable("lam")
        for k in (1, 2):
            g = substitute_ratfuncs(ra.f_hat_d(k).substitute({"x0": lam}), assign)
            assert g.is_zero()


def test_caustic_equation_vanishes_on_preparam(cusp, swallowtail):
    for ra, ca in (cusp, swallowtail):
        assert ca.on_caustic_residual().is_zero()


def test_swallowtail_passes_through_kappa(swallowtail):
    _, ca = swallowtail
    # kappa = (-t^5/500, t^3/50 - 1/(2t)) at t = 1, reached at lam = (1+sqrt(3))/10
    lam = (1 + math.sqrt(3)) / 10
    x, y = ca.point_float(lam, 1.0)
    assert abs(x - (-0.002)) < 1e-12
    assert abs(y - (-0.48)) < 1e-12


def test_cusp_parameters(cusp, swallowtail):
    ra, ca = cusp
    assert [float(v) for v in ca.cusp_parameters(1)] == [0.0]
    ra, cs = swallowtail
    vals = [float(v) for v in cs.cusp_parameters(1)]
    assert len(vals) == 2
    assert abs(vals[0]) < 1e-12 and abs(vals[1] - 0.2) < 1e-10


def test_singular_parameter_flagged():
    ra = build_reduced_action(InitialData(2, poly("x0^5 + x0^6*y0")))
    ca = compute_caustic(ra)
    with pytest.raises(SingularParameterError):
        ca.point_exact(Fraction(0), Fraction(1))


def test_small_time_no_real_precaustic(cusp):
    # diffeomorphism regime: no sign change of det(I + t hess S0) on a grid
    ra, ca = cusp
    t = 0.001
    vals = [
        ca.pre_caustic.eval_float({"x0": u, "y0": v, "t": t})
        for u in np.linspace(-10, 10, 41)
        for v in np.linspace(-10, 10, 41)
    ]
    assert all(v < 0 for v in vals) or all(v > 0 for v in vals)


# ---------- level surfaces ----------------------------------------------------------


def test_level_surface_vanishes_on_parametric_zero_level(cusp):
    ra, _ = cusp
    rho = level_surface(ra, 0, 1)
    checked = 0
    for k in range(1, 26):
        u = -0.99 + 1.98 * (k - 1) / 24
        s = math.sqrt(1 - u * u)
        for sgn in (1.0, -1.0):
            x = u / 2 * (1 + sgn * s)
            y = (u * u - 1 + sgn * s) / 2
            assert abs(rho.eval_float({"x": x, "y": y})) < 1e-10
            checked += 1
    assert checked == 50


def test_level_surface_large_negative_c_empty(swallowtail):
    # S0-driven action is bounded below on the window; far-negative c gives
    # no real points: rho keeps one sign on a grid
    ra, _ = swallowtail
    rho = level_surface(ra, -1000, 1)
    vals = [
        rho.eval_float({"x": x, "y": y})
        for x in np.linspace(-2, 2, 25)
        for y in np.linspace(-2, 2, 25)
    ]
    assert all(v > 0 for v in vals) or all(v < 0 for v in vals)


def test_double_point_set_is_gcd_of_c_resultants(cusp):
    ra, ca = cusp
    g = double_point_set_gcd(ra, 1)
    c_at_1 = ca.algebraic_equation.substitute({"t": Fraction(1)}).canonical()
    b_at_1 = poly("x")
    assert radical(g) == (c_at_1 * b_at_1).normalized()


# ---------- hot / cool ---------------------------------------------------------------


def test_deflation_polynomials_match_displayed_forms(swallowtail):
    ra, ca = swallowtail
    f_tilde, g_tilde = caustic_deflation(ra, ca)
    assert f_tilde == poly("12*lam^2 - 3*lam*t + 6*lam*x0 - t*x0 + 2*x0^2")
    assert g_tilde == poly("15*lam^2 - 4*lam*t + 10*lam*x0 - 2*t*x0 + 5*x0^2")


def test_hot_cool_boundary_points(swallowtail):
    ra, ca = swallowtail
    bps = hot_cool_boundary(ra, ca, 1, lam_window=(-2, 2))
    assert len(bps) == 2
    pts = sorted((float(p[0]), float(p[1])) for _, p, _ in bps)
    kappa = (-0.002, -0.48)
    psi = (-(3 + 8 * math.sqrt(6)) / 18000, (9 - math.sqrt(6)) / 450 - 0.5)
    for g, e in zip(pts, sorted([kappa, psi])):
        assert abs(g[0] - e[0]) < 1e-6 and abs(g[1] - e[1]) < 1e-6


def _brute_force_cool(ra, ca, lam, t):
    """Oracle: critical points located by sign changes of f' on a fine grid
    (bisected), then direct value comparison against f at lam."""
    point = ca.point_float(lam, t)
    assign = {"x": point[0], "y": point[1], "t": float(t)}
    fp = [c.eval_float(assign) for c in ra.f_hat_d(1).coefficients_in("x0")]
    f0 = [c.eval_float(assign) for c in ra.f_hat.coefficients_in("x0")]

    def horner(cs, u):
        acc = 0.0
        for c in reversed(cs):
            acc = acc * u + c
        return acc

    us = np.linspace(-6, 6, 240001)
    vals = np.zeros_like(us)
    for c in reversed(fp):
        vals = vals * us + c
    crit = []
    sign = np.sign(vals)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        a, b = us[i], us[i + 1]
        fa = horner(fp, a)
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = horner(fp, m)
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        crit.append(0.5 * (a + b))
    f_lam = horner(f0, lam)
    others = [horner(f0, u) for u in crit if abs(u - lam) > 1e-7]
    scale = max([1.0, abs(f_lam)] + [abs(v) for v in others])
    return all(f_lam <= v + 1e-9 * scale for v in others)


def test_hot_cool_labels_match_brute_force(swallowtail):
    ra, ca = swallowtail
    lams = [Fraction(k, 1000) for k in range(-120, 321, 22)]
    assert len(lams) >= 20
    for lam in lams:
        got = hot_cool(ra, ca, lam, 1)
        want = "cool" if _brute_force_cool(ra, ca, float(lam), 1.0) else "hot"
        assert got.label == want, (lam, got.label, want)


def test_hot_cool_segment_structure(swallowtail):
    # between the two boundary parameters the caustic is hot; cool outside
    ra, ca = swallowtail
    lam_psi = (3 - 2 * math.sqrt(6)) / 30
    lam_kappa = (1 + math.sqrt(3)) / 10
    inside = Fraction(1, 10)
    left = Fraction(-1, 10)
    right = Fraction(3, 10)
    assert lam_psi < float(inside) < lam_kappa
    assert hot_cool(ra, ca, inside, 1).label == "hot"
    assert float(left) < lam_psi
    assert hot_cool(ra, ca, left, 1).label == "cool"
    assert float(right) > lam_kappa
    assert hot_cool(ra, ca, right, 1).label == "cool"
