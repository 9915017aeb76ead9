"""Maxwell-Klein set via the double discriminant, and the pre-Maxwell set.

D = disc_c(disc_x0(f - c)) factorises as constant * C^3 * B^2; C is extracted
by repeated exact division (the exponent is found, not assumed) and B as the
exact square root of the cofactor.  Computing from the cleared action (2t*f,
2t*c) scales D by a pure t-monomial, which is stripped; C and B are unaffected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..action import ReducedAction, build_flow
from ..polyalg import (
    NotASquareError,
    Polynomial,
    discriminant,
    exact_divide,
    extract_factor,
    poly_sqrt_scaled,
    roots,
)
from .caustic import CausticData, GeometryError, _strip_t_content, compute_caustic


class MaxwellError(GeometryError):
    pass


@dataclass(frozen=True)
class MaxwellKleinData:
    D: Polynomial  # double discriminant (t-content stripped, primitive)
    C: Polynomial  # caustic equation used for extraction
    B: Polynomial  # Maxwell-Klein equation, content 1, positive leading coeff
    multiplicity_record: tuple  # (exponent of C found, exponent of B, constant)


def maxwell_klein(
    ra: ReducedAction,
    t=None,
    caustic: CausticData | None = None,
) -> MaxwellKleinData:
    """Double discriminant and its factorisation; t numeric or symbolic (None)."""
    deg = ra.f_hat.degree("x0")
    if deg < 4:
        raise MaxwellError(
            f"fewer than two critical points possible: reduced action has "
            f"degree {deg} < 4 in x0"
        )
    f_hat = ra.f_hat
    if t is not None:
        f_hat = f_hat.substitute({"t": Fraction(t)}).canonical()
    chat = Polynomial.variable("c")
    inner = discriminant((f_hat - chat).canonical(), "x0")
    m = inner.degree("c")
    if m != deg - 1:
        raise MaxwellError(f"inner discriminant has degree {m} in c, expected {deg - 1}")
    if m < 2:
        raise MaxwellError("fewer than two critical points possible")
    d_raw = discriminant(inner, "c")
    d_poly = _strip_t_content(d_raw.canonical())
    if caustic is None:
        caustic = compute_caustic(ra)
    c_poly = caustic.algebraic_equation
    if t is not None:
        c_poly = _strip_t_content(c_poly.substitute({"t": Fraction(t)}).canonical())
    cofactor, n_c = extract_factor(d_poly, c_poly)
    if n_c < 3:
        raise MaxwellError(
            f"caustic equation divides the double discriminant only {n_c} times "
            "(expected a cube); factorisation invariant violated"
        )
    cofactor = _strip_t_content(cofactor.canonical())
    try:
        b_poly, const = poly_sqrt_scaled(cofactor)
    except NotASquareError as e:
        raise MaxwellError(
            f"cofactor after removing C^{n_c} is not a perfect square; "
            f"obstruction: {e.obstruction.to_text() if e.obstruction is not None else '?'}"
        ) from e
    b_poly = b_poly.normalized()
    # record the full constant relating d_raw to C^n * B^2 (rational * t-power)
    check = c_poly**n_c * b_poly**2
    constant = exact_divide(d_raw.canonical(), check)
    if not constant.used_variables() in ((), ("t",)):
        raise MaxwellError("nonconstant residue after factor extraction")
    return MaxwellKleinData(
        D=d_poly, C=c_poly, B=b_poly, multiplicity_record=(n_c, 2, constant)
    )


# -- classification of points on B ---------------------------------------------------


@dataclass(frozen=True)
class BPointLabel:
    point: tuple
    label: str  # "maxwell" (crunode) | "klein" (acnode)
    n_real_preimages: int
    near_real: bool
    on_caustic: bool = False  # the split is discontinuous exactly on C_t


def classify_b_points(
    ra: ReducedAction,
    mk: MaxwellKleinData,
    t,
    coord_values,
    solve_for: str = "x",
    value_tol: float = 1e-10,
) -> list:
    """Sample B = 0 by fixing the other coordinate on a grid and solving for
    `solve_for`; each sample is labelled crunode (two real pre-images at equal
    action) or acnode (the double point is complex)."""
    tq = Fraction(t)
    b_at = mk.B.substitute({"t": tq}).canonical() if "t" in mk.B.variables else mk.B
    other = "y" if solve_for == "x" else "x"
    out = []
    for v in coord_values:
        vq = Fraction(v)
        univ = b_at.substitute({other: vq}).canonical()
        if univ.degree(solve_for) < 1:
            continue
        try:
            rset = roots(univ, var=solve_for, real_width=Fraction(1, 10**14))
        except Exception:
            continue
        c_at = mk.C.substitute({"t": tq}).canonical() if "t" in mk.C.variables else mk.C
        for rr in rset.real_roots:
            pt = {solve_for: rr.midpoint(), other: vq}
            lab = classify_point(ra, pt, tq, value_tol=value_tol)
            cv, cs = c_at.eval_float_scaled({k: float(v) for k, v in pt.items()})
            if abs(cv) <= 1e-9 * cs:
                lab = BPointLabel(
                    point=lab.point, label=lab.label,
                    n_real_preimages=lab.n_real_preimages,
                    near_real=lab.near_real, on_caustic=True,
                )
            out.append(lab)
    return out


def classify_point(ra: ReducedAction, point: dict, t, value_tol: float = 1e-10) -> BPointLabel:
    tq = Fraction(t)
    assign = {k: Fraction(v) for k, v in point.items()}
    assign["t"] = tq
    fu = ra.f_hat_d(1).substitute(assign).canonical()
    f_here = ra.f_hat.substitute(assign).canonical()
    # pair locations are only counted here; a loose pair width keeps huge
    # cleared coefficients (from exact sample coordinates) acceptable
    rset = roots(fu, var="x0", real_width=Fraction(1, 10**14), pair_width=1e-5)
    vals = [float(Fraction(f_here.eval_exact({"x0": r.midpoint()}))) for r in rset.real_roots]
    scale = max([1.0] + [abs(v) for v in vals])
    crunode = False
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if abs(vals[i] - vals[j]) <= value_tol * scale:
                crunode = True
    near_real = any(p.near_real for p in rset.complex_pairs)
    n_real = sum(r.multiplicity for r in rset.real_roots)
    label = "maxwell" if crunode else "klein"
    return BPointLabel(
        point=tuple(float(assign[k]) for k in sorted(point)),
        label=label,
        n_real_preimages=n_real,
        near_real=near_real,
    )


# -- pre-Maxwell set -------------------------------------------------------------------


def pre_maxwell(ra: ReducedAction, t=None) -> tuple:
    """Pre-Maxwell polynomial in the initial coordinates: the discriminant in
    the second pre-image variable of

        G = (f_(Phi(x0),t)(x0^1) - f_(Phi(x0),t)(x0c)) / (x0^1 - x0c)^2.

    Returns (main, pre_caustic_power, raw): any pre-caustic factor of the raw
    discriminant is recorded separately."""
    data = ra.data
    flow = build_flow(data)
    space_sub = {v: phi for v, phi in zip(data.space(), flow.phi)}
    f_at_base = ra.f_hat.substitute(space_sub).canonical()
    f_at_check = ra.f_hat.substitute({"x0": Polynomial.variable("x0c")}).substitute(
        space_sub
    ).canonical()
    num = (f_at_base - f_at_check).canonical()
    shift = Polynomial.variable("x0") - Polynomial.variable("x0c")
    g = exact_divide(num, shift * shift)
    if t is not None:
        g = g.substitute({"t": Fraction(t)}).canonical()
    raw = discriminant(g, "x0c").canonical()
    pre_c = flow.det_jacobian().normalized()
    if t is not None:
        pre_c = pre_c.substitute({"t": Fraction(t)}).canonical().normalized()
    main, k = extract_factor(_strip_t_content(raw), pre_c)
    return _strip_t_content(main.canonical()), k, raw
