"""Classical flow map, stochastic action, and the reduced action function.

Supported family: V = 0, k_t(x) = a.x (scalar Brownian noise in a fixed
direction a, possibly zero), and initial phase

    S0(x0) = p(x0^1) + sum_{alpha>=2} g_alpha(x0^1) * x0^alpha,

with no products among the upper coordinates.  Each upper coordinate is then
eliminated by x0^alpha = x_alpha - t*g_alpha(x0^1), and the reduced action is

    f(x0^1; x, t) = (x_1 - x0^1)^2/(2t) + p + sum g_alpha x_alpha
                    - (t/2) sum g_alpha^2.

All symbolic work uses the cleared polynomial f_hat = 2t*f (the single 1/(2t)
pole is recorded); t > 0 at evaluation so zero sets and orderings at a fixed
point are unaffected.

Noise enters exactly: the action for k = a.x is

    A(x0,x,t) = |x - x0 + eps*a*intW|^2/(2t) - eps*(a.x)*W_t
                - (eps^2*|a|^2/2) * intW2,

so the reduced action with noise is the deterministic one evaluated at the
translated point x + eps*a*intW plus terms free of x0^1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .polyalg import Polynomial, RatFunc

INITIAL_COORDS = ("x0", "y0", "z0")
SPACE_COORDS = ("x", "y", "z")


class FamilyError(ValueError):
    """Initial data outside the supported closed-form family."""


class ChainDegenerateError(FamilyError):
    """An upper coordinate does not couple (its chain coefficient vanishes)."""


@dataclass(frozen=True)
class InitialData:
    dimension: int
    s0: Polynomial
    noise_direction: tuple = (0, 0)
    epsilon: Fraction = Fraction(0)

    def __post_init__(self):
        d = self.dimension
        if d not in (2, 3):
            raise FamilyError(f"dimension must be 2 or 3, got {d}")
        coords = INITIAL_COORDS[:d]
        extra = set(self.s0.used_variables()) - set(coords)
        if extra:
            raise FamilyError(f"S0 uses unknown variables {sorted(extra)}; expected {coords}")
        uppers = coords[1:]
        s = self.s0.with_variables(coords)
        for exps, _ in s.terms.items():
            upper_total = sum(e for v, e in zip(s.variables, exps) if v in uppers)
            if upper_total > 1:
                raise FamilyError(
                    "S0 must be affine in the upper coordinates with no products "
                    f"among them; offending monomial {exps}"
                )
        if len(self.noise_direction) != d:
            raise FamilyError(
                f"noise direction has {len(self.noise_direction)} components, expected {d}"
            )
        if Fraction(self.epsilon) < 0:
            raise FamilyError("epsilon must be >= 0")
        if all(g.is_zero() for g in self.upper_couplings().values()):
            raise FamilyError("all upper couplings g_alpha vanish; problem is 1-dimensional")
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        object.__setattr__(
            self, "noise_direction", tuple(Fraction(a) for a in self.noise_direction)
        )

    def coords(self) -> tuple:
        return INITIAL_COORDS[: self.dimension]

    def space(self) -> tuple:
        return SPACE_COORDS[: self.dimension]

    def base_part(self) -> Polynomial:
        """p(x0^1): the S0 terms free of all upper coordinates."""
        s = self.s0.with_variables(self.coords())
        rest = {}
        idx = [s.variables.index(v) for v in self.coords()[1:]]
        for exps, c in s.terms.items():
            if all(exps[i] == 0 for i in idx):
                rest[exps] = c
        return Polynomial(s.variables, rest).canonical()

    def upper_couplings(self) -> dict:
        """{upper coordinate: g_alpha(x0)}."""
        s = self.s0.with_variables(self.coords())
        out = {}
        for v in self.coords()[1:]:
            out[v] = _coefficient_of_linear(s, v)
        return out

    def gradient(self) -> tuple:
        return tuple(self.s0.derivative(v) for v in self.coords())


def _coord_key(v):
    from .polyalg import variable_key

    return variable_key(v)


def _coefficient_of_linear(s: Polynomial, v: str) -> Polynomial:
    cs = s.coefficients_in(v)
    return cs[1].canonical() if len(cs) > 1 else Polynomial.zero()


@dataclass(frozen=True)
class FlowMap:
    """x = Phi_t(x0) = x0 + t*grad(S0)(x0) - eps*a*intW; jacobian = I + t*hess(S0)."""

    data: InitialData
    phi: tuple
    phi_dot: tuple
    jacobian: tuple

    def det_jacobian(self) -> Polynomial:
        d = self.data.dimension
        if d == 2:
            (a, b), (c, e) = self.jacobian
            return (a * e - b * c).canonical()
        (a, b, c), (e, f, g), (h, i, j) = self.jacobian
        return (
            a * (f * j - g * i) - b * (e * j - g * h) + c * (e * i - f * h)
        ).canonical()

    def apply_exact(self, point: dict, t, int_w: Fraction = Fraction(0)) -> tuple:
        """Evaluate Phi_t at exact coordinates; int_w = integral of W over [0,t]."""
        assign = dict(point)
        assign["t"] = t
        shift = [self.data.epsilon * a * int_w for a in self.data.noise_direction]
        return tuple(
            Fraction(p.eval_exact(assign)) - s for p, s in zip(self.phi, shift)
        )

    def apply_float(self, point: dict, t: float, int_w: float = 0.0) -> tuple:
        assign = {k: float(v) for k, v in point.items()}
        assign["t"] = float(t)
        shift = [float(self.data.epsilon * a) * int_w for a in self.data.noise_direction]
        return tuple(p.eval_float(assign) - s for p, s in zip(self.phi, shift))


def build_flow(data: InitialData) -> FlowMap:
    t = Polynomial.variable("t")
    grad = data.gradient()
    coords = data.coords()
    phi = tuple(Polynomial.variable(v) + t * g for v, g in zip(coords, grad))
    jac = []
    for i, vi in enumerate(coords):
        row = []
        for j, vj in enumerate(coords):
            entry = t * data.s0.derivative(vi).derivative(vj)
            if i == j:
                entry = entry + 1
            row.append(entry.canonical())
        jac.append(tuple(row))
    return FlowMap(data=data, phi=phi, phi_dot=grad, jacobian=tuple(jac))


@dataclass(frozen=True)
class ReducedAction:
    """f_hat = 2t*f with f the reduced action; chain maps each upper initial
    coordinate to its elimination x0^alpha = x_alpha - t*g_alpha(x0)."""

    data: InitialData
    f_hat: Polynomial
    chain: dict
    _mem: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def dimension(self) -> int:
        return self.data.dimension

    def f_hat_d(self, k: int) -> Polynomial:
        """k-th x0-derivative of f_hat (cached)."""
        key = ("d", k)
        if key not in self._mem:
            p = self.f_hat
            for _ in range(k):
                p = p.derivative("x0")
            self._mem[key] = p
        return self._mem[key]

    def f_at(self, point: dict) -> Polynomial:
        """Univariate (in x0) specialization of f_hat; point gives exact values
        for the space coordinates and t."""
        return self.f_hat.substitute(point).canonical()

    def f_value_float(self, x0: float, point: dict) -> float:
        assign = {k: float(v) for k, v in point.items()}
        assign["x0"] = float(x0)
        return self.f_hat.eval_float(assign) / (2.0 * assign["t"])

    def noisy_f_hat(self, w: str = "W", iw: str = "IW", iw2: str = "IW2") -> Polynomial:
        """2t * (reduced action with noise), with W_t, int W ds, int |aW|^2-free
        norms as the symbols w, iw, iw2 (scalar Brownian path)."""
        eps = self.data.epsilon
        a = self.data.noise_direction
        space = self.data.space()
        shift = {
            v: Polynomial.variable(v) + Polynomial.variable(iw) * (eps * ai)
            for v, ai in zip(space, a)
            if eps * ai != 0
        }
        translated = self.f_hat.substitute(shift) if shift else self.f_hat
        a2 = sum(Fraction(ai) ** 2 for ai in a)
        tt = Polynomial.variable("t")
        extra = Polynomial.zero()
        if eps != 0 and a2 != 0:
            ax = sum(
                (Polynomial.variable(v) * ai for v, ai in zip(space, a)),
                Polynomial.zero(),
            )
            extra = (
                -2 * tt * (eps * ax * Polynomial.variable(w))
                - tt * Polynomial.variable(iw2) * (eps**2 * a2)
            )
        return (translated + extra).canonical()


def build_reduced_action(data: InitialData) -> ReducedAction:
    t = Polynomial.variable("t")
    u = Polynomial.variable("x0")
    couplings = data.upper_couplings()
    chain = {}
    for upper, space_v in zip(data.coords()[1:], data.space()[1:]):
        g = couplings[upper]
        if g.is_zero():
            raise ChainDegenerateError(
                f"chain equation degenerate: coefficient of {upper} vanishes identically"
            )
        chain[upper] = (Polynomial.variable(space_v) - t * g).canonical()
    p = data.base_part()
    x1 = Polynomial.variable(data.space()[0])
    f_hat = (x1 - u) ** 2 + 2 * t * p
    for upper, space_v in zip(data.coords()[1:], data.space()[1:]):
        g = couplings[upper]
        f_hat = f_hat + 2 * t * g * Polynomial.variable(space_v) - t * t * g * g
    return ReducedAction(data=data, f_hat=f_hat.canonical(), chain=chain)


# -- exact identity checks ------------------------------------------------------------


def hessian_product_identity(data: InitialData) -> tuple:
    """Lemma-style product formula in cleared form: substituting the inverse
    chain x_alpha = x0^alpha + t*g_alpha into f_hat'' must give exactly
    2*det(I + t*hess(S0)).  Returns (lhs, rhs) polynomials."""
    ra = build_reduced_action(data)
    flow = build_flow(data)
    t = Polynomial.variable("t")
    couplings = data.upper_couplings()
    inverse_chain = {
        space_v: Polynomial.variable(upper) + t * couplings[upper]
        for upper, space_v in zip(data.coords()[1:], data.space()[1:])
    }
    lhs = ra.f_hat_d(2).substitute(inverse_chain).canonical()
    rhs = (2 * flow.det_jacobian()).canonical()
    return lhs, rhs


def hessian_product_check(data: InitialData, point: dict | None = None) -> bool:
    """Exact Lemma-18 check; optionally also compares |det hess(A)| with
    |f''| * (1/t)^(d-1) at a sample point in floats."""
    lhs, rhs = hessian_product_identity(data)
    if lhs != rhs:
        return False
    if point is not None:
        d = data.dimension
        tval = float(point["t"])
        flow = build_flow(data)
        det_hess_a = flow.det_jacobian().eval_float(
            {k: float(v) for k, v in point.items()}
        ) / tval**d
        ra = build_reduced_action(data)
        assign = {k: float(v) for k, v in point.items()}
        for upper, space_v in zip(data.coords()[1:], data.space()[1:]):
            g = data.upper_couplings()[upper].eval_float(assign)
            assign[space_v] = assign[upper] + tval * g
        fpp = ra.f_hat_d(2).eval_float(assign) / (2 * tval)
        if abs(abs(det_hess_a) - abs(fpp) * (1 / tval) ** (d - 1)) > 1e-9 * (
            1 + abs(det_hess_a)
        ):
            return False
    return True


def flow_equivalence_identity(ra: ReducedAction) -> bool:
    """Critical points of f are exactly pre-images: as polynomials,
    Phi_1(x0, chain) == x_1 + t*f' and Phi_alpha(x0, chain) == x_alpha."""
    data = ra.data
    flow = build_flow(data)
    subs = dict(ra.chain)
    # first flow coordinate minus (x1 + f_hat'/2) must vanish identically
    first = flow.phi[0].substitute(subs).canonical()
    target = (Polynomial.variable(data.space()[0]) + ra.f_hat_d(1) * Fraction(1, 2)).canonical()
    if first != target:
        return False
    for alpha, space_v in zip(data.coords()[1:], data.space()[1:]):
        img = flow.phi[data.coords().index(alpha)].substitute(subs).canonical()
        if img != Polynomial.variable(space_v):
            return False
    return True


def verify_preimage_roundtrip(ra: ReducedAction, x0_point: dict, t: Fraction) -> bool:
    """Exact sample check: x := Phi_t(x0) makes x0^1 a critical point of
    f_(x,t), the chain reproduces the upper coordinates, and Phi_t(x0) == x."""
    data = ra.data
    flow = build_flow(data)
    x = flow.apply_exact(x0_point, t)
    assign = {v: xi for v, xi in zip(data.space(), x)}
    assign["t"] = t
    assign["x0"] = x0_point["x0"]
    if ra.f_hat_d(1).eval_exact(assign) != 0:
        return False
    for upper in data.coords()[1:]:
        if ra.chain[upper].eval_exact(assign) != Fraction(x0_point[upper]):
            return False
    # residual |Phi_t(x0) - x| is identically zero by construction; re-verify
    return flow.apply_exact(x0_point, t) == x
