"""Swallowtail perestroikas and complex double points of the caustic.

Perestroikas solve f' = f'' = f''' = f'''' = 0.  In the supported family the
three highest conditions are affine in the second space coordinate and free
of the first, so eliminating it leaves two polynomial conditions in (lam, t);
real solutions are located by exact resultant/root isolation plus Newton
polishing, and x is recovered from f' = 0.

Complex double points solve Im x_t(a + i*eta) = 0 componentwise with eta > 0,
after substituting s = eta^2 (both conditions are odd in eta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..action import ReducedAction
from ..polyalg import (
    Polynomial,
    poly_gcd,
    real_roots_in,
    resultant,
)
from .caustic import CausticData, GeometryError, solve_affine


@dataclass(frozen=True)
class PerestroikaEvent:
    t: float
    lam: float
    point: tuple  # (x, y) or None when the certificate fails
    certificate: bool  # gradients of f', f'' in x independent at the root
    dx_dlam: tuple
    d2x_dlam2: tuple


@dataclass(frozen=True)
class ComplexDoublePoint:
    a: float
    eta: float
    t: float
    curve_tag: str = "caustic"
    boundary_flag: bool = False


def _affine_parts(p: Polynomial, var: str) -> tuple:
    cs = p.coefficients_in(var)
    if len(cs) > 2:
        raise GeometryError(f"{var} not affine in derivative condition")
    b = cs[0] if cs else Polynomial.zero()
    a = cs[1] if len(cs) > 1 else Polynomial.zero()
    return a, b


def caustic_condition_numerators(
    ra: ReducedAction, caustic: CausticData, strip_t: bool = True
) -> tuple:
    """(n3, n4): reduced numerators of f''' and f'''' along the caustic
    pre-parameterisation.  The rational-function reduction cancels exactly the
    lam-power artifacts of the parameterisation's pole while keeping genuine
    lam factors (real caustic cusps).  Shared by the perestroika solver and
    the resultant eta process; strip_t additionally normalizes away positive
    t-powers (used for elimination, not for process values)."""
    if ra.dimension != 2:
        raise GeometryError("supported for d = 2")
    from ..polyalg import substitute_ratfuncs

    lam = Polynomial.variable("lam")
    assign = {v: c for v, c in zip(ra.data.space(), caustic.preparam)}
    out = []
    for k in (3, 4):
        fk = ra.f_hat_d(k).substitute({"x0": lam}).canonical()
        if fk.degree("x") > 0:
            raise GeometryError("derivative depends on x; outside supported family")
        rat = substitute_ratfuncs(fk, assign)
        n = rat.num.canonical()
        if strip_t:
            n = n.strip_variable_content("t").primitive_part()
        out.append(n)
    return tuple(out)


def perestroika_detect(
    ra: ReducedAction,
    caustic: CausticData,
    t_range=(Fraction(1, 100), Fraction(10)),
    lam_window=(-100, 100),
    tol: float = 1e-10,
) -> list:
    """All swallowtail perestroika events with t in t_range.  An empty result
    is certified by exact real-root exclusion of the eliminated system."""
    e1, e2 = caustic_condition_numerators(ra, caustic)
    g = poly_gcd(e1, e2)
    if not g.is_constant():
        e1 = _exact_div(e1, g)
        e2 = _exact_div(e2, g)
        if _has_real_solutions_in_box(g, t_range, lam_window):
            raise GeometryError(
                "degenerate perestroika family (common factor with real solutions): "
                + g.to_text()
            )
    t_lo, t_hi = Fraction(t_range[0]), Fraction(t_range[1])
    candidates_t = _candidate_times(e1, e2, t_lo, t_hi)
    events = []
    lam_var = Polynomial.variable("lam")
    f2 = ra.f_hat_d(2).substitute({"x0": lam_var}).canonical()
    a2, b2 = _affine_parts(f2, "y")
    for t_star in candidates_t:
        e1_t = e1.substitute({"t": t_star}).canonical()
        if e1_t.degree("lam") < 1:
            continue
        lam_cands = list(
            real_roots_in(e1_t, lam_window[0], lam_window[1], var="lam", width=1e-20)
        )
        # tangential case: a conjugate pair joins the real axis exactly at the
        # event, so the lam-root of E1 is double there; it is a simple (stable)
        # root of dE1/dlam instead
        d1 = e1_t.derivative("lam")
        if d1.degree("lam") >= 1:
            for r in real_roots_in(d1, lam_window[0], lam_window[1], var="lam", width=1e-20):
                v, s = _eval_scaled(e1_t, {"lam": float(r)})
                if abs(v) <= 1e-8 * s:
                    lam_cands.append(r)
        for lam_star in lam_cands:
            val2, scale2 = _eval_scaled(e2, {"lam": float(lam_star), "t": float(t_star)})
            if abs(val2) > 1e-6 * scale2:
                continue
            sol = _newton_2d(e1, e2, float(lam_star), float(t_star))
            if sol is None:
                # singular-Jacobian (tangential) case: the isolated pair is
                # already accurate; accept it if the residuals vanish
                a = {"lam": float(lam_star), "t": float(t_star)}
                v1, s1 = _eval_scaled(e1, a)
                v2, s2 = _eval_scaled(e2, a)
                if abs(v1) <= 1e-9 * s1 and abs(v2) <= 1e-9 * s2:
                    sol = (float(lam_star), float(t_star))
            if sol is None:
                continue
            lam_f, t_f = sol
            if not (float(t_lo) - 1e-12 <= t_f <= float(t_hi) + 1e-12):
                continue
            if any(abs(ev.t - t_f) < 1e-8 and abs(ev.lam - lam_f) < 1e-8 for ev in events):
                continue
            a2v = a2.eval_float({"lam": lam_f, "t": t_f})
            cert = abs(a2v) > tol
            point = None
            if cert:
                yv = -b2.eval_float({"lam": lam_f, "t": t_f}) / a2v
                f1 = ra.f_hat_d(1)
                # f_hat' = -2x + (rest): solve for x
                rest = (f1 + 2 * Polynomial.variable("x")).canonical()
                xv = rest.eval_float({"x0": lam_f, "y": yv, "t": t_f}) / 2.0
                point = (xv, yv)
            vel = tuple(c.eval_float({"lam": lam_f, "t": t_f}) for c in caustic.velocity())
            acc = tuple(c.eval_float({"lam": lam_f, "t": t_f}) for c in caustic.acceleration())
            events.append(
                PerestroikaEvent(
                    t=t_f, lam=lam_f, point=point, certificate=cert,
                    dx_dlam=vel, d2x_dlam2=acc,
                )
            )
    return sorted(events, key=lambda ev: ev.t)


def _exact_div(p, d):
    from ..polyalg import exact_divide

    return exact_divide(p, d).canonical()


def _candidate_times(e1: Polynomial, e2: Polynomial, t_lo: Fraction, t_hi: Fraction) -> list:
    """Exact candidate t values for common roots of the eliminated system."""
    d1, d2 = e1.degree("lam"), e2.degree("lam")
    if d1 < 1 and d2 < 1:
        # both conditions in t only: need simultaneous roots
        r1 = set(real_roots_in(e1, t_lo, t_hi, var="t")) if not e1.is_constant() else set()
        if e1.is_constant() and not e1.is_zero():
            return []
        r2 = set(real_roots_in(e2, t_lo, t_hi, var="t")) if not e2.is_constant() else set()
        if e2.is_constant() and not e2.is_zero():
            return []
        return sorted(r1 & r2)
    if d1 < 1 or d2 < 1:
        only_t = e1 if d1 < 1 else e2
        if only_t.is_constant():
            return [] if not only_t.is_zero() else _roots_t(e2 if d1 < 1 else e1, t_lo, t_hi)
        return _roots_t(only_t, t_lo, t_hi)
    res = resultant(e1, e2, "lam").canonical()
    res = res.strip_monomial_content().primitive_part()
    if res.is_zero():
        raise GeometryError("eliminated system degenerates (zero resultant)")
    if res.is_constant():
        return []
    return _roots_t(res, t_lo, t_hi)


def _roots_t(p: Polynomial, t_lo, t_hi) -> list:
    if p.degree("t") < 1:
        return []
    return real_roots_in(p, t_lo, t_hi, var="t", width=1e-24)


def _has_real_solutions_in_box(g: Polynomial, t_range, lam_window) -> bool:
    # coarse sign scan; only used to report a degenerate family honestly
    ts = np.linspace(float(t_range[0]), float(t_range[1]), 40)
    ls = np.linspace(float(lam_window[0]), float(lam_window[1]), 80)
    vals = np.array([[g.eval_float({"lam": l, "t": t}) for l in ls] for t in ts])
    return bool((vals.max() >= 0) and (vals.min() <= 0))


def _eval_scaled(p: Polynomial, assign: dict) -> tuple:
    return p.eval_float_scaled(assign)


def _newton_2d(
    e1: Polynomial, e2: Polynomial, u0: float, v0: float, vars=("lam", "t"), max_iter=60
):
    du1, dv1 = e1.derivative(vars[0]), e1.derivative(vars[1])
    du2, dv2 = e2.derivative(vars[0]), e2.derivative(vars[1])
    u, v = u0, v0
    for _ in range(max_iter):
        a = {vars[0]: u, vars[1]: v}
        f1, s1 = _eval_scaled(e1, a)
        f2, s2 = _eval_scaled(e2, a)
        j11, j12 = du1.eval_float(a), dv1.eval_float(a)
        j21, j22 = du2.eval_float(a), dv2.eval_float(a)
        det = j11 * j22 - j12 * j21
        if det == 0:
            return None
        du = (f1 * j22 - f2 * j12) / det
        dv = (f2 * j11 - f1 * j21) / det
        u -= du
        v -= dv
        if abs(du) < 1e-15 * (1 + abs(u)) and abs(dv) < 1e-15 * (1 + abs(v)):
            break
    a = {vars[0]: u, vars[1]: v}
    f1, s1 = _eval_scaled(e1, a)
    f2, s2 = _eval_scaled(e2, a)
    if abs(f1) <= 1e-9 * s1 and abs(f2) <= 1e-9 * s2:
        return u, v
    return None


# -- complex double points -------------------------------------------------------------


def complex_split(p: Polynomial, var: str, re_var: str = "a", im_var: str = "eta") -> tuple:
    """(Re, Im) of p(a + i*eta) for a univariate real-coefficient polynomial."""
    re_terms: dict = {}
    im_terms: dict = {}
    cs = p.coefficients_in(var)
    for k, ck in enumerate(cs):
        if ck.is_zero():
            continue
        c = ck.constant_value()
        for j in range(k + 1):
            coeff = c * math.comb(k, j)
            mono = ((k - j), j)
            r = j % 4
            if r == 0:
                re_terms[mono] = re_terms.get(mono, 0) + coeff
            elif r == 1:
                im_terms[mono] = im_terms.get(mono, 0) + coeff
            elif r == 2:
                re_terms[mono] = re_terms.get(mono, 0) - coeff
            else:
                im_terms[mono] = im_terms.get(mono, 0) - coeff
    vs = (re_var, im_var)
    return Polynomial(vs, re_terms), Polynomial(vs, im_terms)


def _even_in_eta_to_s(p: Polynomial, im_var: str = "eta", s_var: str = "s") -> Polynomial:
    if im_var not in p.variables:
        return p
    i = p.variables.index(im_var)
    terms = {}
    for exps, c in p.terms.items():
        if exps[i] % 2:
            raise GeometryError("polynomial not even in eta")
        key = exps[:i] + (exps[i] // 2,) + exps[i + 1 :]
        terms[key] = c
    q = Polynomial(p.variables, terms)
    return q.substitute({im_var: Polynomial.variable(s_var)})


def imaginary_conditions(caustic: CausticData, t) -> tuple:
    """(U1, U2) in (a, s = eta^2): vanishing of Im x_t(a + i eta)/eta per
    coordinate, denominators cleared by the conjugate."""
    tq = Fraction(t)
    out = []
    for comp in caustic.preparam:
        n = comp.num.substitute({"t": tq}).canonical()
        d = comp.den.substitute({"t": tq}).canonical()
        n_re, n_im = complex_split(n, "lam")
        if d.degree("lam") < 1:
            im = n_im
        else:
            d_re, d_im = complex_split(d, "lam")
            im = (n_im * d_re - n_re * d_im).canonical()
        im = im.strip_variable_content("eta")  # one factor of eta is structural
        im_even = im
        if im_even.degree("eta") % 2:
            raise GeometryError("unexpected parity in imaginary part")
        u = _even_in_eta_to_s(im_even)
        out.append(u.canonical().strip_monomial_content().primitive_part())
    return tuple(out)


def complex_double_points(
    caustic: CausticData,
    t,
    a_window=(-5, 5),
    eta_window=(1e-6, 5),
) -> list:
    """Conjugate-pair intersections of Im x_t^1 = Im x_t^2 = 0 with eta > 0
    inside the window; near-boundary hits are flagged possibly-missed."""
    if caustic.dimension != 2:
        raise GeometryError("complex double points computed for d = 2")
    tq = Fraction(t)
    u1, u2 = imaginary_conditions(caustic, tq)
    s_lo = Fraction(eta_window[0]) ** 2
    s_hi = Fraction(eta_window[1]) ** 2
    a_lo, a_hi = Fraction(a_window[0]), Fraction(a_window[1])
    sols = _solve_bivariate(u1, u2, ("a", a_lo, a_hi), ("s", s_lo, s_hi))
    out = []
    for a_val, s_val in sols:
        eta = math.sqrt(s_val)
        boundary = (
            a_val - float(a_lo) < 1e-6
            or float(a_hi) - a_val < 1e-6
            or eta - float(eta_window[0]) < 1e-9
            or float(eta_window[1]) - eta < 1e-6
        )
        out.append(
            ComplexDoublePoint(a=a_val, eta=eta, t=float(tq), boundary_flag=boundary)
        )
    return sorted(out, key=lambda p: (p.a, p.eta))


def _solve_bivariate(u1: Polynomial, u2: Polynomial, dim1: tuple, dim2: tuple) -> list:
    """Real solutions of {u1 = 0, u2 = 0} inside a box, via resultant
    elimination of the second variable + exact isolation + Newton."""
    v1, lo1, hi1 = dim1
    v2, lo2, hi2 = dim2
    g = poly_gcd(u1, u2)
    if not g.is_constant():
        raise GeometryError(
            f"conditions share a curve of solutions (gcd {g.to_text()}); "
            "counts are not isolated points"
        )
    d1, d2 = u1.degree(v2), u2.degree(v2)
    if d1 < 1 and d2 < 1:
        return []
    if d1 < 1 or d2 < 1:
        flat, other = (u1, u2) if d1 < 1 else (u2, u1)
        sols = []
        if flat.degree(v1) < 1:
            return []
        for r1 in real_roots_in(flat, lo1, hi1, var=v1, width=1e-22):
            sub = other.substitute({v1: r1}).canonical()
            if sub.degree(v2) < 1:
                continue
            for r2 in real_roots_in(sub, lo2, hi2, var=v2, width=1e-22):
                sols.append((float(r1), float(r2)))
        return sols
    res = resultant(u1, u2, v2).canonical().strip_monomial_content().primitive_part()
    if res.is_zero():
        raise GeometryError("resultant vanished identically despite trivial gcd")
    if res.degree(v1) < 1:
        return []
    sols = []
    for r1 in real_roots_in(res, lo1, hi1, var=v1, width=1e-25):
        sub = u1.substitute({v1: r1}).canonical()
        if sub.degree(v2) < 1:
            # u1 degenerates at this a; fall back to the other condition
            sub = u2.substitute({v1: r1}).canonical()
            if sub.degree(v2) < 1:
                continue
        for r2 in real_roots_in(sub, lo2, hi2, var=v2, width=1e-22):
            val_other, scale = _eval_scaled(u2, {v1: float(r1), v2: float(r2)})
            if abs(val_other) > 1e-5 * scale:
                continue
            polished = _newton_2d(u1, u2, float(r1), float(r2), vars=(v1, v2))
            if polished is None:
                continue
            p1, p2 = polished
            if not (float(lo1) - 1e-9 <= p1 <= float(hi1) + 1e-9):
                continue
            if not (float(lo2) * (1 - 1e-9) - 1e-30 <= p2 <= float(hi2) * (1 + 1e-9)):
                continue
            if any(abs(p1 - q1) < 1e-7 and abs(p2 - q2) < 1e-7 for q1, q2 in sols):
                continue
            sols.append((p1, p2))
    return sols
