"""Caustic computation: pre-caustic, pre-parameterisation, implicit equation,
generalized cusps, and the hot/cool decomposition.

The pre-parameterisation solves f' = f'' = 0 for the space point as exact
rational functions of the parameter lam (the critical coordinate x0^1 renamed);
equivalently it is the flow image of the pre-caustic.  The hot/cool machinery
deflates f - f(lam) by (x0 - lam)^3 and normalizes the cofactor to integer
content 1, which reproduces the displayed boundary polynomials exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..action import ReducedAction, build_flow
from ..polyalg import (
    Polynomial,
    RatFunc,
    discriminant,
    exact_divide,
    poly_gcd,
    real_roots_in,
    resultant,
    roots,
    substitute_ratfuncs,
)


class GeometryError(ValueError):
    pass


class SingularParameterError(GeometryError):
    """The pre-parameterisation denominator vanishes at the requested lam."""


def solve_affine(p: Polynomial, var: str) -> RatFunc:
    """Solve A*var + B = 0 (A, B free of var) exactly: var = -B/A."""
    cs = p.coefficients_in(var)
    if len(cs) != 2:
        raise GeometryError(f"{var} does not occur affinely (degree {len(cs)-1})")
    b, a = cs
    if a.is_zero():
        raise GeometryError(f"coefficient of {var} vanishes identically")
    return RatFunc(-b, a)


@dataclass(frozen=True)
class CausticData:
    ra: ReducedAction
    pre_caustic: Polynomial  # det(I + t*hess S0) over initial coords + t
    preparam: tuple  # RatFunc coordinates of x_t(lam) (lam2 as well for d=3)
    singular_denominator: Polynomial  # lam values to exclude (denominator zero set)
    algebraic_equation: Polynomial  # C_t over space coords + t, primitive
    _mem: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def dimension(self) -> int:
        return self.ra.dimension

    def point_exact(self, lam: Fraction, t: Fraction) -> tuple:
        assign = {"lam": Fraction(lam), "t": Fraction(t)}
        den = self.singular_denominator.eval_exact(assign)
        if den == 0:
            raise SingularParameterError(f"lam = {lam} is a flagged singular parameter")
        return tuple(c.eval_exact(assign) for c in self.preparam)

    def point_float(self, lam: float, t: float) -> tuple:
        return tuple(c.eval_float({"lam": lam, "t": t}) for c in self.preparam)

    def velocity(self) -> tuple:
        """d x_t / d lam as RatFuncs (d = 2)."""
        key = "velocity"
        if key not in self._mem:
            self._mem[key] = tuple(c.derivative("lam") for c in self.preparam)
        return self._mem[key]

    def acceleration(self) -> tuple:
        key = "acceleration"
        if key not in self._mem:
            self._mem[key] = tuple(c.derivative("lam") for c in self.velocity())
        return self._mem[key]

    def cusp_parameters(self, t: Fraction, lam_window=(-100, 100)) -> list:
        """Generalized cusps: real lam with dx_t/dlam = 0 (both coordinates),
        excluding flagged singular parameters."""
        if self.dimension != 2:
            raise GeometryError("cusp parameters are computed for d = 2")
        tq = Fraction(t)
        nums = []
        for comp in self.velocity():
            n = comp.num.substitute({"t": tq}).canonical()
            if not n.is_zero():
                nums.append(n)
        if not nums:
            return []
        g = nums[0]
        for n in nums[1:]:
            g = poly_gcd(g, n)
        if g.degree("lam") < 1:
            return []
        out = []
        for r in real_roots_in(g, lam_window[0], lam_window[1], var="lam"):
            den = self.singular_denominator.eval_exact({"lam": r, "t": tq})
            if den != 0:
                out.append(r)
        return out

    def on_caustic_residual(self) -> RatFunc:
        """C_t(x_t(lam), t): identically zero by construction (tested)."""
        assign = {v: c for v, c in zip(self.ra.data.space(), self.preparam)}
        return substitute_ratfuncs(self.algebraic_equation, assign)


def _strip_t_content(p: Polynomial) -> Polynomial:
    """Drop artifact t-powers (from pole clearing) but keep coordinate
    monomial factors, which are geometrically meaningful."""
    return p.strip_variable_content("t").primitive_part()


def compute_caustic(ra: ReducedAction) -> CausticData:
    """Caustic data with t symbolic; numeric questions specialize afterwards."""
    data = ra.data
    flow = build_flow(data)
    pre_caustic = flow.det_jacobian().normalized()
    if data.dimension == 2:
        y_on = solve_affine(ra.f_hat_d(2), "y")
        f1 = substitute_ratfuncs(ra.f_hat_d(1), {"y": y_on})
        x_on = solve_affine(f1.num, "x")  # denominator of f1 is x-free
        lam = Polynomial.variable("lam")
        x_param = x_on.substitute({"x0": lam})
        y_param = y_on.substitute({"x0": lam})
        preparam = (x_param, y_param)
        singular = (x_param.den * y_param.den).canonical().normalized()
        c_t = resultant(ra.f_hat_d(1), ra.f_hat_d(2), "x0")
        c_t = _strip_t_content(c_t.canonical())
    else:
        z_on = solve_affine(pre_caustic, "z0")
        lam, lam2 = Polynomial.variable("lam"), Polynomial.variable("lam2")
        rename = {"x0": lam, "y0": lam2}
        z_param = z_on.substitute(rename)
        coords = []
        for phi in flow.phi:
            comp = substitute_ratfuncs(phi.substitute(rename), {"z0": z_param})
            coords.append(comp)
        preparam = tuple(coords)
        singular = z_param.den.canonical().normalized()
        # implicit equation: eliminate x0 between f'=f''=0 (both affine in y,z)
        c_t = _eliminate_caustic_3d(ra)
    return CausticData(
        ra=ra,
        pre_caustic=pre_caustic,
        preparam=preparam,
        singular_denominator=singular,
        algebraic_equation=c_t,
    )


def _eliminate_caustic_3d(ra: ReducedAction) -> Polynomial:
    # f'' = 0 solves one upper space coordinate; substituting into f' = 0 and
    # eliminating x0 against the solved relation gives the implicit surface.
    # For the supported family f'' is affine in z (and y); solve for z.
    f2 = ra.f_hat_d(2)
    z_on = solve_affine(f2, "z")
    f1 = substitute_ratfuncs(ra.f_hat_d(1), {"z": z_on})
    num = f1.num.canonical()
    res = resultant(num, f2, "x0")
    return _strip_t_content(res.canonical())


def preparam_matches_flow_image(caustic: CausticData) -> bool:
    """Definition check: x_t(lam) == Phi_t(lam, chain-on-pre-caustic) (d = 2)."""
    ra = caustic.ra
    flow = build_flow(ra.data)
    y0_on = solve_affine(caustic.pre_caustic, "y0").substitute({"x0": Polynomial.variable("lam")})
    for comp_param, phi in zip(caustic.preparam, flow.phi):
        phi_l = phi.substitute({"x0": Polynomial.variable("lam")})
        image = substitute_ratfuncs(phi_l, {"y0": y0_on})
        if not (image == comp_param):
            return False
    return True


# -- level surfaces -----------------------------------------------------------------


def level_surface(ra: ReducedAction, c, t=None) -> Polynomial:
    """rho_(t,c)(x) = resultant(f - c, f', x0), computed from the cleared
    action (positive scale for t > 0); t numeric or symbolic (None)."""
    tt = Polynomial.variable("t")
    f_shift = ra.f_hat - 2 * Fraction(c) * tt
    fp = ra.f_hat_d(1)
    if t is not None:
        f_shift = f_shift.substitute({"t": Fraction(t)})
        fp = fp.substitute({"t": Fraction(t)})
    rho = resultant(f_shift.canonical(), fp.canonical(), "x0")
    return _strip_t_content(rho.canonical())


def pre_level_surface(ra: ReducedAction, c, t) -> Polynomial:
    """Pre-level curve in initial coordinates: S0 + (t/2)|grad S0|^2 - c = 0
    (epsilon = 0 picture)."""
    data = ra.data
    tq = Fraction(t)
    grad = data.gradient()
    v = data.s0 + Fraction(tq, 2) * sum(
        (g * g for g in grad), Polynomial.zero()
    ) - Fraction(c)
    return v.canonical()


def double_point_set_gcd(ra: ReducedAction, t) -> Polynomial:
    """gcd of the two c-resultants of rho: the equation of all level-surface
    double points at fixed t (zero-set comparison object)."""
    rho = level_surface_symbolic_c(ra, t)
    d1 = rho.derivative("x")
    d2 = rho.derivative("y")
    r1 = resultant(rho, d1, "c")
    r2 = resultant(d1, d2, "c")
    g = poly_gcd(r1.canonical(), r2.canonical())
    return g.primitive_part()


def level_surface_symbolic_c(ra: ReducedAction, t) -> Polynomial:
    tq = Fraction(t)
    f_shift = (ra.f_hat - Polynomial.variable("c")).substitute({"t": tq})
    fp = ra.f_hat_d(1).substitute({"t": tq})
    rho = resultant(f_shift.canonical(), fp.canonical(), "x0")
    return rho.canonical().primitive_part()


# -- hot / cool ---------------------------------------------------------------------


@dataclass(frozen=True)
class HotCoolLabel:
    lam: float
    point: tuple
    label: str  # "cool" | "hot"
    boundary_flag: bool
    tie: bool = False


def caustic_deflation(ra: ReducedAction, caustic: CausticData) -> tuple:
    """(F~, G~): deflation of f - f(lam) on the caustic by (x0 - lam)^3 and
    G~ = 3F~ + (x0 - lam)F~', each normalized to integer content 1."""
    if "deflation" in caustic._mem:
        return caustic._mem["deflation"]
    lam = Polynomial.variable("lam")
    assign = {v: c for v, c in zip(ra.data.space(), caustic.preparam)}
    on_caustic = substitute_ratfuncs(ra.f_hat, assign)
    at_lam = on_caustic.substitute({"x0": lam})
    diff = on_caustic - at_lam
    num = diff.num.canonical()
    shift = Polynomial.variable("x0") - lam
    f_tilde = exact_divide(num, shift**3)
    f_tilde = f_tilde.strip_monomial_content().primitive_part()
    g_tilde = (3 * f_tilde + shift * f_tilde.derivative("x0")).canonical()
    g_tilde = g_tilde.strip_monomial_content().primitive_part()
    caustic._mem["deflation"] = (f_tilde, g_tilde)
    return f_tilde, g_tilde


def hot_cool(
    ra: ReducedAction,
    caustic: CausticData,
    lam,
    t,
    value_tol: float = 1e-10,
) -> HotCoolLabel:
    """Label x_t(lam): cool iff f at lam is <= f at every other real critical
    point; boundary_flag iff disc(F~) or disc(G~) vanishes at (lam, t)."""
    lam_q, tq = Fraction(lam), Fraction(t)
    point = caustic.point_exact(lam_q, tq)
    assign = {v: p for v, p in zip(ra.data.space(), point)}
    assign["t"] = tq
    fu = ra.f_hat_d(1).substitute(assign).canonical()
    f_here = ra.f_hat.substitute(assign).canonical()
    f_lam = Fraction(f_here.eval_exact({"x0": lam_q}))
    rset = roots(fu, var="x0", real_width=Fraction(1, 10**15), pair_width=1e-5)
    scale = max(1.0, abs(float(f_lam)))
    label = "cool"
    tie = False
    for r in rset.real_roots:
        rv = r.midpoint()
        if abs(float(rv - lam_q)) < 1e-9:
            continue
        val = Fraction(f_here.eval_exact({"x0": rv}))
        gap = float(f_lam - val)
        if gap > value_tol * scale:
            label = "hot"
        elif abs(gap) <= value_tol * scale:
            tie = True
    f_tilde, g_tilde = caustic_deflation(ra, caustic)
    at = {"lam": lam_q, "t": tq}
    boundary = False
    for p in (f_tilde, g_tilde):
        # degree < 2 in x0: no repeated root is possible
        if p.degree("x0") >= 2 and discriminant(p, "x0").eval_exact(at) == 0:
            boundary = True
    return HotCoolLabel(
        lam=float(lam_q),
        point=tuple(float(p) for p in point),
        label=label,
        boundary_flag=boundary or tie,
        tie=tie,
    )


def hot_cool_boundary(
    ra: ReducedAction,
    caustic: CausticData,
    t,
    lam_window=(-100, 100),
    probe: float = 1e-3,
) -> list:
    """Boundary points at fixed t: lam where disc(F~) or disc(G~) vanishes,
    filtered to those where the hot/cool label actually changes nearby.
    Returns [(lam: Fraction, point: tuple, source: str), ...]."""
    tq = Fraction(t)
    f_tilde, g_tilde = caustic_deflation(ra, caustic)
    candidates = []
    for src, p in (("F", f_tilde), ("G", g_tilde)):
        if p.degree("x0") < 2:
            continue  # no repeated root possible
        d = discriminant(p, "x0").substitute({"t": tq}).canonical()
        if d.is_zero() or d.degree("lam") < 1:
            continue
        for r in real_roots_in(d, lam_window[0], lam_window[1], var="lam", width=1e-18):
            candidates.append((r, src))
    out = []
    for lam_q, src in sorted(candidates):
        try:
            caustic.point_exact(lam_q, tq)
        except SingularParameterError:
            continue
        eps = Fraction(probe).limit_denominator(10**6)
        try:
            left = hot_cool(ra, caustic, lam_q - eps, tq)
            right = hot_cool(ra, caustic, lam_q + eps, tq)
        except SingularParameterError:
            continue
        if left.label != right.label:
            out.append((lam_q, caustic.point_exact(lam_q, tq), src))
    return out
