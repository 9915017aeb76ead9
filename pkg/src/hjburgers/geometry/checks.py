"""Sampled verification of the cusp/normal interplay between pre-curves and
their flow images: level-surface cusps lie on the caustic, tangents at
pre-curve intersections align with the Hessian kernel, and Maxwell-set cusps
are the images of pre-Maxwell/pre-caustic intersections."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..action import ReducedAction, build_flow
from ..polyalg import Polynomial, RatFunc, real_roots_in, substitute_ratfuncs
from .caustic import CausticData, GeometryError, pre_level_surface, solve_affine
from .maxwell import pre_maxwell


@dataclass
class IntersectionCheck:
    pre_point: tuple
    image: tuple
    caustic_residual: float
    tangent_kernel_sin: float
    image_speed: float  # |DPhi . tangent| / |tangent|
    on_caustic: bool
    is_generalized_cusp: bool
    at_caustic_cusp: bool = False  # Maxwell set terminates there, no cusp


@dataclass
class CuspCheckReport:
    t: float
    tolerances: dict
    level_checks: dict = field(default_factory=dict)  # c -> [IntersectionCheck]
    maxwell_checks: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def maxwell_cusp_count(self) -> int:
        """Generalized cusps of the Maxwell set proper: pre-curve intersection
        images that are not termination points at a cusp of the caustic."""
        return sum(
            1
            for ch in self.maxwell_checks
            if ch.is_generalized_cusp and not ch.at_caustic_cusp
        )

    def all_level_cusps_on_caustic(self) -> bool:
        return all(
            ch.on_caustic for checks in self.level_checks.values() for ch in checks
        )


def _curve_intersections_with_precaustic(
    curve: Polynomial, pre_caustic: Polynomial, window=(-50, 50)
) -> list:
    """Real intersections of a curve in (x0, y0) with the pre-caustic, which
    is affine in y0 in the supported family."""
    y0_on = solve_affine(pre_caustic, "y0")
    sub = substitute_ratfuncs(curve, {"y0": y0_on})
    w = sub.num.canonical()
    if w.degree("x0") < 1:
        return []
    pts = []
    for r in real_roots_in(w, window[0], window[1], var="x0", width=1e-18):
        den = y0_on.den.eval_exact({"x0": r})
        if den == 0:
            continue
        pts.append((r, y0_on.eval_exact({"x0": r})))
    return pts


def _kernel_direction(m11, m12, m22) -> tuple:
    """Kernel direction of a (numerically) singular symmetric 2x2 matrix."""
    if abs(m11) + abs(m12) >= abs(m12) + abs(m22):
        v = (m12, -m11) if (m11, m12) != (0, 0) else (1.0, 0.0)
    else:
        v = (m22, -m12)
    n = math.hypot(*v)
    return (v[0] / n, v[1] / n) if n else (1.0, 0.0)


def _check_point(
    ra: ReducedAction,
    caustic: CausticData,
    curve: Polynomial,
    pt: tuple,
    t,
    tol_caustic: float,
    tol_angle: float,
) -> IntersectionCheck:
    data = ra.data
    flow = build_flow(data)
    tq = Fraction(t)
    assign = {"x0": pt[0], "y0": pt[1], "t": tq}
    fassign = {k: float(v) for k, v in assign.items()}
    image = tuple(p.eval_float(fassign) for p in flow.phi)
    c_poly = caustic.algebraic_equation
    val, scale = c_poly.eval_float_scaled(
        {"x": image[0], "y": image[1], "t": float(tq)}
    )
    # tangent of the pre-curve
    gx = curve.derivative("x0").eval_float(fassign)
    gy = curve.derivative("y0").eval_float(fassign)
    tau = (-gy, gx)
    tau_n = math.hypot(*tau) or 1.0
    tau = (tau[0] / tau_n, tau[1] / tau_n)
    # jacobian DPhi = I + t hess(S0)
    jac = [[e.eval_float(fassign) for e in row] for row in flow.jacobian]
    m11, m12, m22 = jac[0][0], jac[0][1], jac[1][1]
    e0 = _kernel_direction(m11, m12, m22)
    sin_angle = abs(tau[0] * e0[1] - tau[1] * e0[0])
    img_speed = math.hypot(
        jac[0][0] * tau[0] + jac[0][1] * tau[1],
        jac[1][0] * tau[0] + jac[1][1] * tau[1],
    )
    resid = abs(val) / max(scale, 1.0)
    return IntersectionCheck(
        pre_point=(float(pt[0]), float(pt[1])),
        image=image,
        caustic_residual=resid,
        tangent_kernel_sin=sin_angle,
        image_speed=img_speed,
        on_caustic=resid <= tol_caustic,
        is_generalized_cusp=img_speed <= math.sqrt(tol_angle),
    )


def cusp_and_normal_checks(
    ra: ReducedAction,
    caustic: CausticData,
    t,
    c_values=(Fraction(1),),
    window=(-50, 50),
    tol_caustic: float = 1e-8,
    tol_angle: float = 1e-8,
) -> CuspCheckReport:
    """Numerical verification report for d = 2: every detected level-surface
    cusp lies on C_t; tangents at pre-curve intersections are parallel to the
    Hessian kernel; Maxwell-set cusps are images of pre-Maxwell/pre-caustic
    intersections."""
    if ra.dimension != 2:
        raise GeometryError("cusp/normal checks are d = 2 only")
    tq = Fraction(t)
    flow = build_flow(ra.data)
    pre_c = flow.det_jacobian().substitute({"t": tq}).canonical()
    report = CuspCheckReport(
        t=float(tq),
        tolerances={"caustic_residual": tol_caustic, "tangent_kernel_sin": tol_angle},
    )
    for c in c_values:
        curve = pre_level_surface(ra, c, tq)
        checks = []
        for pt in _curve_intersections_with_precaustic(curve, pre_c, window):
            ch = _check_point(ra, caustic, curve, pt, tq, tol_caustic, tol_angle)
            checks.append(ch)
            if not ch.on_caustic:
                report.failures.append(
                    f"level c={c}: cusp image {ch.image} off caustic "
                    f"(residual {ch.caustic_residual:.2e})"
                )
            if ch.tangent_kernel_sin > tol_angle:
                report.failures.append(
                    f"level c={c}: tangent not parallel to kernel "
                    f"(|sin| {ch.tangent_kernel_sin:.2e})"
                )
        report.level_checks[c] = checks
    pm_main, _, _ = pre_maxwell(ra, t=tq)
    pm_t = pm_main
    cusp_images = [
        caustic.point_float(float(lam), float(tq))
        for lam in caustic.cusp_parameters(tq, lam_window=window)
    ]
    for pt in _curve_intersections_with_precaustic(pm_t, pre_c, window):
        ch = _check_point(ra, caustic, pm_t, pt, tq, tol_caustic, tol_angle)
        ch.at_caustic_cusp = any(
            math.hypot(ch.image[0] - ci[0], ch.image[1] - ci[1]) < 1e-7
            for ci in cusp_images
        )
        report.maxwell_checks.append(ch)
        if not ch.on_caustic:
            report.failures.append(
                f"maxwell cusp image {ch.image} off caustic "
                f"(residual {ch.caustic_residual:.2e})"
            )
    return report
