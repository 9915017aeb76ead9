import math
from fractions import Fraction

import pytest

from hjburgers.action import InitialData, build_reduced_action
from hjburgers.geometry import (
    complex_double_points,
    complex_split,
    compute_caustic,
    cusp_and_normal_checks,
    perestroika_detect,
)
from hjburgers.polyalg import Polynomial, poly

T_CRITICAL = 4 * math.sqrt(2) * 33**0.75 * 7 ** (-1.75)


@pytest.fixture(scope="module")
def hexic():
    ra = build_reduced_action(InitialData(2, poly("x0^5 + x0^6*y0")))
    return ra, compute_caustic(ra)


@pytest.fixture(scope="module")
def cusp():
    ra = build_reduced_action(InitialData(2, poly("1/2*x0^2*y0")))
    return ra, compute_caustic(ra)


def test_complex_split_matches_direct_evaluation():
    p = poly("lam^4 - 3*lam^2 + 2*lam - 7")
    re, im = complex_split(p, "lam")
    for a, e in ((0.3, 0.7), (-1.2, 0.25)):
        z = complex(a, e)
        direct = sum(
            float(c.constant_value()) * z**k
            for k, c in enumerate(p.coefficients_in("lam"))
            if not c.is_zero()
        )
        assert abs(re.eval_float({"a": a, "eta": e}) - direct.real) < 1e-12
        assert abs(im.eval_float({"a": a, "eta": e}) - direct.imag) < 1e-12


def test_perestroika_critical_time(hexic):
    ra, ca = hexic
    events = perestroika_detect(ra, ca, t_range=(Fraction(1, 100), 10))
    assert len(events) == 1
    ev = events[0]
    assert abs(ev.t - T_CRITICAL) < 1e-6
    assert ev.certificate
    # collapse point: first and second parameter derivatives vanish
    assert max(abs(v) for v in ev.dx_dlam) < 1e-8
    assert max(abs(v) for v in ev.d2x_dlam2) < 1e-8
    # lam solves -49 t / 264 exactly in the limit
    assert abs(ev.lam - (-49 * ev.t / 264)) < 1e-8


def test_generic_cusp_never_perestroika(cusp):
    ra, ca = cusp
    assert perestroika_detect(ra, ca, t_range=(Fraction(1, 100), 10)) == []


def test_complex_double_point_counts(hexic):
    ra, ca = hexic
    before = complex_double_points(ca, Fraction(24, 10))
    after = complex_double_points(ca, Fraction(27, 10))
    assert len(before) == 5
    assert len(after) == 4
    assert all(p.eta > 0 for p in before + after)


def test_vanishing_pair_eta_decreases_to_critical_time(hexic):
    ra, ca = hexic
    etas = []
    for tv in (Fraction(250, 100), Fraction(255, 100), Fraction(258, 100)):
        pts = complex_double_points(ca, tv)
        assert len(pts) == 5
        etas.append(min(p.eta for p in pts))
    assert etas[0] > etas[1] > etas[2] > 0


def test_generic_cusp_count_constant_in_time(cusp):
    ra, ca = cusp
    counts = {len(complex_double_points(ca, tv)) for tv in (1, 2, 5)}
    assert counts == {0}


# ---------- cusp and normal checks ------------------------------------------------


def test_generic_cusp_level_surface_cusp_pair(cusp):
    ra, ca = cusp
    rep = cusp_and_normal_checks(ra, ca, 1, c_values=(1,))
    checks = rep.level_checks[1]
    assert len(checks) == 2  # one symmetric cusp pair
    assert rep.all_level_cusps_on_caustic()
    xs = sorted(ch.pre_point[0] for ch in checks)
    assert abs(xs[0] + xs[1]) < 1e-12
    for ch in checks:
        assert ch.tangent_kernel_sin < 1e-8
        assert ch.is_generalized_cusp
    assert not rep.failures


def test_swallowtail_maxwell_cusp_count():
    ra = build_reduced_action(
        InitialData(2, poly("x0^5 + x0^2*y0"), noise_direction=(1, 0))
    )
    ca = compute_caustic(ra)
    rep = cusp_and_normal_checks(ra, ca, 1, c_values=(Fraction(1, 100),))
    assert rep.maxwell_cusp_count == 2
    assert not rep.failures
    # every pre-curve intersection maps onto the caustic
    for ch in rep.maxwell_checks:
        assert ch.on_caustic


def test_level_cusps_lie_on_caustic_swallowtail():
    ra = build_reduced_action(
        InitialData(2, poly("x0^5 + x0^2*y0"), noise_direction=(1, 0))
    )
    ca = compute_caustic(ra)
    rep = cusp_and_normal_checks(
        ra, ca, 1, c_values=(Fraction(-1, 100), Fraction(1, 100), Fraction(1, 10))
    )
    assert rep.all_level_cusps_on_caustic()
    total = sum(len(v) for v in rep.level_checks.values())
    assert total >= 3
    for checks in rep.level_checks.values():
        for ch in checks:
            assert ch.caustic_residual <= 1e-8
