import math
from fractions import Fraction

import numpy as np
import pytest

from hjburgers.action import InitialData, build_reduced_action
from hjburgers.geometry import (
    MaxwellError,
    classify_b_points,
    compute_caustic,
    maxwell_klein,
    pre_maxwell,
)
from hjburgers.polyalg import Polynomial, divides, poly

# the displayed Maxwell-Klein polynomial for S0 = x0^5 + x0^2*y0
EXAMPLE_B_TEXT = (
    "-675 + 52*t^4 - t^8 + 3120*t^3*x - 224*t^7*x + 4*t^11*x - 38400*t^2*x^2"
    " + 1408*t^6*x^2 + 128000*t*x^3 - 5400*t*y + 312*t^5*y - 4*t^9*y"
    " + 12480*t^4*x*y - 448*t^8*x*y - 76800*t^3*x^2*y - 16200*t^2*y^2"
    " + 624*t^6*y^2 - 4*t^10*y^2 + 12480*t^5*x*y^2 - 21600*t^3*y^3"
    " + 416*t^7*y^3 - 10800*t^4*y^4"
)


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
def swallowtail_mk(swallowtail):
    ra, ca = swallowtail
    return maxwell_klein(ra, caustic=ca)


def test_generic_cusp_maxwell_line(cusp):
    ra, ca = cusp
    mk = maxwell_klein(ra, caustic=ca)
    assert mk.B == poly("x")
    assert mk.multiplicity_record[0] == 3
    assert mk.multiplicity_record[1] == 2


def test_exponents_found_by_division(swallowtail_mk):
    n_c, n_b, const = swallowtail_mk.multiplicity_record
    assert (n_c, n_b) == (3, 2)
    # the residue is a rational times a pure t-power
    assert const.used_variables() in ((), ("t",))


def test_swallowtail_b_matches_displayed_polynomial(swallowtail_mk):
    expected = poly(EXAMPLE_B_TEXT)
    got = swallowtail_mk.B
    # equality up to a nonzero rational scalar (here the scalar is exactly 1)
    lead = expected.leading_coeff_grlex()
    assert got * lead == expected * got.leading_coeff_grlex()
    assert got == expected.normalized()


def test_factorisation_reconstructs_double_discriminant(swallowtail_mk):
    mk = swallowtail_mk
    n_c, n_b, const = mk.multiplicity_record
    assert divides(mk.C**n_c * mk.B**n_b, mk.D * const)


def test_quadratic_initial_data_rejected():
    ra = build_reduced_action(InitialData(2, poly("x0^2 + x0*y0")))
    with pytest.raises(MaxwellError) as e:
        maxwell_klein(ra)
    assert "fewer than two critical points" in str(e.value)


def _brute_force_maxwell_point(ra, t, xs, ys):
    """Oracle: grid-scan for a point whose reduced action has two distinct
    critical points at (nearly) equal values, via numpy roots."""
    best = None
    for x in xs:
        for y in ys:
            assign = {"x": x, "y": y, "t": t}
            fp = [c.eval_float(assign) for c in ra.f_hat_d(1).coefficients_in("x0")]
            rr = np.roots(list(reversed(fp)))
            real = sorted(r.real for r in rr if abs(r.imag) < 1e-9)
            f0 = [c.eval_float(assign) for c in ra.f_hat.coefficients_in("x0")]

            def val(u):
                acc = 0.0
                for c in reversed(f0):
                    acc = acc * u + c
                return acc

            for i in range(len(real)):
                for j in range(i + 1, len(real)):
                    if abs(real[i] - real[j]) < 1e-5:
                        continue
                    gap = abs(val(real[i]) - val(real[j]))
                    if best is None or gap < best[0]:
                        best = (gap, x, y)
    return best


def test_double_discriminant_vanishes_at_brute_force_maxwell_point(cusp):
    ra, ca = cusp
    mk = maxwell_klein(ra, caustic=ca)
    # refine the equal-values point along y by bisection on the gap
    best = _brute_force_maxwell_point(
        ra, 1.0, np.linspace(-0.04, 0.04, 9), np.linspace(-0.6, 1.2, 10)
    )
    gap, x, y = best
    # polish x toward the equal-action locus by local scan
    for scale in (1e-2, 1e-3, 1e-4, 1e-5, 1e-6):
        b = _brute_force_maxwell_point(
            ra, 1.0, np.linspace(x - scale, x + scale, 11), [y]
        )
        if b and b[0] < gap:
            gap, x, y = b
    d_val, d_scale = mk.D.eval_float_scaled({"x": x, "y": y, "t": 1.0})
    assert abs(d_val) <= 1e-10 * d_scale


def test_maxwell_klein_split_generic_cusp(cusp):
    ra, ca = cusp
    mk = maxwell_klein(ra, caustic=ca)
    ys = [Fraction(k, 10) for k in range(-30, 21, 2) if k != -10]
    pts = classify_b_points(ra, mk, 1, ys, solve_for="x")
    assert len(pts) >= 20
    for p in pts:
        x, y = p.point
        if y > -1:
            assert p.label == "maxwell" and p.n_real_preimages == 3
        else:
            assert p.label == "klein" and p.n_real_preimages == 1


def test_maxwell_klein_split_swallowtail(swallowtail, swallowtail_mk):
    # inside the caustic swallowtail: crunode (four real pre-images);
    # outside: acnode (two real and one conjugate pair)
    ra, ca = swallowtail
    ys = [Fraction(-52, 100) + Fraction(k, 400) for k in range(0, 26)]
    pts = [
        p
        for p in classify_b_points(ra, swallowtail_mk, 1, ys, solve_for="x")
        if not p.on_caustic
    ]
    inside = [p for p in pts if p.label == "maxwell"]
    outside = [p for p in pts if p.label == "klein"]
    assert inside and outside
    for p in inside:
        assert p.n_real_preimages == 4
    for p in outside:
        assert p.n_real_preimages == 2


def test_klein_maxwell_invariant_100_points(swallowtail, swallowtail_mk):
    ra, ca = swallowtail
    ys = [Fraction(-60, 100) + Fraction(k, 100) for k in range(0, 120)]
    pts = [
        p
        for p in classify_b_points(ra, swallowtail_mk, 1, ys, solve_for="x")
        if not p.on_caustic
    ]
    assert len(pts) >= 100
    for p in pts:
        assert p.label in ("maxwell", "klein")
        if p.label == "maxwell":
            assert p.n_real_preimages >= 2


# ---------- pre-Maxwell --------------------------------------------------------------


def test_pre_maxwell_generic_cusp_factor(cusp):
    ra, _ = cusp
    main, k, raw = pre_maxwell(ra)
    assert main == poly("t*y0 + 1")


def test_pre_maxwell_even_s0_symmetry():
    ra = build_reduced_action(InitialData(2, poly("x0^4 + x0^2*y0")))
    main, _, _ = pre_maxwell(ra, t=1)
    flipped = main.substitute({"x0": -Polynomial.variable("x0")}).canonical()
    assert flipped.normalized() == main.normalized()
