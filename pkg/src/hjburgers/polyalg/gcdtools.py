"""Exact division, multivariate gcd, square-free machinery.

gcd uses the primitive pseudo-remainder sequence recursively over the
coefficient ring; exact division works term-by-term under the graded-lex
order (valid over Q since the order is multiplicative).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .poly import Polynomial, variable_key


class DivisionError(ArithmeticError):
    """Exact polynomial division failed (nonzero remainder)."""


def exact_divide(p: Polynomial, d: Polynomial) -> Polynomial:
    """Quotient q with q*d == p exactly; raises DivisionError otherwise."""
    if d.is_zero():
        raise ZeroDivisionError("exact division by the zero polynomial")
    if p.is_zero():
        return Polynomial.zero(p.variables)
    vs, pt, dt = p._aligned_with(d)
    r = dict(pt)
    lead_d = max(dt, key=lambda e: (sum(e), e))
    cd = dt[lead_d]
    q: dict[tuple, object] = {}
    while r:
        lead_r = max(r, key=lambda e: (sum(e), e))
        delta = tuple(a - b for a, b in zip(lead_r, lead_d))
        if any(e < 0 for e in delta):
            bad = next(
                v for v, a, b in zip(vs, lead_r, lead_d) if a < b
            )
            raise DivisionError(
                f"exact division failed: remainder term {lead_r} not divisible "
                f"by divisor leading term {lead_d} (variable {bad!r})"
            )
        coeff = Fraction(r[lead_r]) / Fraction(cd)
        coeff = coeff.numerator if coeff.denominator == 1 else coeff
        q[delta] = coeff
        for e, c in dt.items():
            key = tuple(a + b for a, b in zip(delta, e))
            prev = r.get(key)
            val = (prev - coeff * c) if prev is not None else -coeff * c
            if val:
                r[key] = val
            elif prev is not None:
                del r[key]
    return Polynomial(vs, q)


def divides(d: Polynomial, p: Polynomial) -> bool:
    try:
        exact_divide(p, d)
        return True
    except DivisionError:
        return False


def _main_variable(p: Polynomial, q: Polynomial) -> str | None:
    """Variable minimizing the larger of the two degrees (keeps the
    pseudo-remainder sequence short); canonical order breaks ties."""
    cand = set(p.used_variables()) | set(q.used_variables())
    if not cand:
        return None
    return min(cand, key=lambda v: (max(p.degree(v), q.degree(v)), variable_key(v)))


def _coeff_gcd(coeffs: list) -> Polynomial:
    g = Polynomial.zero()
    for c in coeffs:
        g = poly_gcd(g, c)
        if g.is_constant() and not g.is_zero():
            break
    return g


def _pseudo_rem(a: list, b: list, var: str) -> list:
    """Pseudo-remainder of dense coefficient lists (index = exponent)."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        lead = a[-1]
        a = [c * lb for c in a]
        shift = da - db
        for i, bc in enumerate(b):
            a[shift + i] = a[shift + i] - lead * bc
        while a and a[-1].is_zero():
            a.pop()
    return a


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized to content 1 and positive leading
    coefficient under the canonical graded-lex order; gcd(p, 0) = normalized p.

    Uses the division-verified heuristic gcd (big-integer evaluation and
    balanced-digit reconstruction) with a primitive-PRS fallback; the final
    exact-division check makes the result unconditional."""
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    p = p.canonical()
    q = q.canonical()
    if p.is_constant() or q.is_constant():
        return Polynomial.constant(1)
    # monomial content splits off cheaply
    pm, qm = p.monomial_content(), q.monomial_content()
    if any(pm) or any(qm):
        ps = p.strip_monomial_content()
        qs = q.strip_monomial_content()
        common: dict[str, int] = {}
        for v, e in zip(p.variables, pm):
            common[v] = e
        mono = {v: min(e, common.get(v, 0)) for v, e in zip(q.variables, qm) if v in common}
        g = poly_gcd(ps, qs)
        for v, e in mono.items():
            if e:
                g = g * Polynomial.variable(v) ** e
        return g.normalized()
    pz = _integerize(p)
    qz = _integerize(q)
    g = _heuristic_gcd(pz, qz)
    if g is None:
        g = _prs_gcd(pz, qz)
    return g.normalized()


def _integerize(p: Polynomial) -> Polynomial:
    """Primitive integer version (content 1 over Z, positive grlex lead)."""
    return p.primitive_part()


def _max_norm(p: Polynomial) -> int:
    m = 0
    for c in p.terms.values():
        c = abs(Fraction(c).numerator)
        if c > m:
            m = c
    return m


def _smod(a: int, m: int) -> int:
    r = a % m
    if 2 * r > m:
        r -= m
    return r


def _eval_var_int(p: Polynomial, var: str, xi: int) -> Polynomial:
    """p with var evaluated at the integer xi (exact, integer coefficients)."""
    if var not in p.variables:
        return p
    i = p.variables.index(var)
    rest = p.variables[:i] + p.variables[i + 1 :]
    out: dict = {}
    for exps, c in p.terms.items():
        key = exps[:i] + exps[i + 1 :]
        val = c * xi ** exps[i]
        prev = out.get(key)
        s = val if prev is None else prev + val
        if s:
            out[key] = s
        elif prev is not None:
            del out[key]
    return Polynomial(rest, out)


def _digits(h: Polynomial, var: str, xi: int) -> Polynomial | None:
    """Balanced base-xi digit reconstruction of a polynomial in var."""
    digits = []
    guard = 0
    while not h.is_zero():
        guard += 1
        if guard > 2000:
            return None
        dig_terms = {}
        for exps, c in h.terms.items():
            d = _smod(int(c), xi)
            if d:
                dig_terms[exps] = d
        digit = Polynomial(h.variables, dig_terms)
        digits.append(digit)
        h = (h - digit).scale_divide(xi)
        if any(Fraction(c).denominator != 1 for c in h.terms.values()):
            return None
    v = Polynomial.variable(var)
    total = Polynomial.zero()
    for k, d in enumerate(digits):
        total = total + d * v**k
    return total


def _heuristic_gcd(p: Polynomial, q: Polynomial, depth: int = 0):
    """Char-Geddes-Gonnet heuristic gcd over Z; returns None on failure.
    A returned value is verified by exact division, hence always correct."""
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    if p.is_constant() or q.is_constant():
        return Polynomial.constant(1)
    var = _main_variable(p, q)
    xi = 2 * min(_max_norm(p), _max_norm(q)) + 4
    for _ in range(6):
        if xi.bit_length() * max(p.degree(var), q.degree(var)) > 600_000:
            return None
        pe = _eval_var_int(p, var, xi)
        qe = _eval_var_int(q, var, xi)
        if pe.is_zero() or qe.is_zero():
            xi = xi * 3 + 1
            continue
        if pe.is_constant() and qe.is_constant():
            h = Polynomial.constant(math.gcd(int(pe.constant_value()), int(qe.constant_value())))
        else:
            h = _heuristic_gcd(pe.primitive_part(), qe.primitive_part(), depth + 1)
            if h is None:
                xi = xi * 3 + 1
                continue
            # restore the integer content of the evaluations
            cont = math.gcd(int(pe.content()), int(qe.content()))
            h = h * cont
        cand = _digits(h, var, xi)
        if cand is not None and not cand.is_zero():
            cand = cand.primitive_part()
            if divides(cand, p) and divides(cand, q):
                return cand
        xi = (xi * 73794) // 27011 + 3
    return None


def _prs_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Primitive pseudo-remainder-sequence gcd (fallback path)."""
    var = _main_variable(p, q)
    pa = p.coefficients_in(var)
    qa = q.coefficients_in(var)
    if len(pa) == 1 or len(qa) == 1:
        if len(pa) == 1:
            return poly_gcd(pa[0], _coeff_gcd(qa)).normalized()
        return poly_gcd(qa[0], _coeff_gcd(pa)).normalized()
    cont_p = _coeff_gcd(pa)
    cont_q = _coeff_gcd(qa)
    c = poly_gcd(cont_p, cont_q)
    a = [exact_divide(x, cont_p) for x in pa]
    b = [exact_divide(x, cont_q) for x in qa]
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _pseudo_rem(a, b, var)
        if not r:
            g = Polynomial.from_coefficients(var, b)
            break
        if len(r) == 1:
            g = Polynomial.constant(1)
            break
        rg = _coeff_gcd(r)
        a, b = b, [exact_divide(x, rg) for x in r]
    ga = g.coefficients_in(var)
    gc = _coeff_gcd(ga)
    g = Polynomial.from_coefficients(var, [exact_divide(x, gc) for x in ga])
    return (c * g).normalized()


def poly_gcd_many(polys: list) -> Polynomial:
    g = Polynomial.zero()
    for p in polys:
        g = poly_gcd(g, p)
    return g


def squarefree_part(p: Polynomial, var: str) -> Polynomial:
    """p / gcd(p, dp/dvar), normalized."""
    dp = p.derivative(var)
    if dp.is_zero():
        return p.normalized()
    g = poly_gcd(p, dp)
    return exact_divide(p, g).normalized()


def radical(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors (char 0):
    p / gcd(p, all partial derivatives), normalized."""
    if p.is_zero() or p.is_constant():
        return p.normalized()
    g = p
    for v in p.used_variables():
        g = poly_gcd(g, p.derivative(v))
        if g.is_constant():
            return p.normalized()
    return exact_divide(p, g).normalized()


def yun_squarefree(p: Polynomial, var: str) -> list:
    """Yun decomposition of a univariate-in-var polynomial:
    returns [(factor, multiplicity), ...] with p = content * Π factor^mult."""
    if p.degree(var) < 1:
        return []
    dp = p.derivative(var)
    a = poly_gcd(p, dp)
    b = exact_divide(p, a)
    c = exact_divide(dp, a)
    d = c - b.derivative(var)
    out = []
    i = 1
    while b.degree(var) > 0:
        g = poly_gcd(b, d)
        if g.degree(var) > 0:
            out.append((g.normalized(), i))
        b2 = exact_divide(b, g)
        c2 = exact_divide(d, g)
        d = c2 - b2.derivative(var)
        b = b2
        i += 1
    return out


def extract_factor(p: Polynomial, f: Polynomial, max_power: int = 64) -> tuple:
    """Divide p by f as many times as exactly possible; returns (cofactor, power)."""
    power = 0
    while power < max_power:
        try:
            p = exact_divide(p, f)
        except DivisionError:
            break
        power += 1
    return p, power


class NotASquareError(ArithmeticError):
    """Polynomial is not a perfect square times a rational."""

    def __init__(self, msg, obstruction=None):
        super().__init__(msg)
        self.obstruction = obstruction


def poly_sqrt_scaled(p: Polynomial) -> tuple:
    """Write p = const * b**2 with b primitive; returns (b, const).

    Works via gcd(p, dp/dv) for a variable v where that yields the root;
    raises NotASquareError with the obstruction otherwise.
    """
    if p.is_zero():
        return Polynomial.zero(), Fraction(0)
    p = p.canonical()
    if p.is_constant():
        return Polynomial.constant(1), Fraction(p.constant_value())
    last_obstruction = None
    for v in p.used_variables():
        cand = poly_gcd(p, p.derivative(v))
        if cand.is_constant():
            last_obstruction = p
            continue
        cand = cand.normalized()
        try:
            rest = exact_divide(exact_divide(p, cand), cand)
        except DivisionError:
            last_obstruction = cand
            continue
        if rest.is_constant():
            return cand, Fraction(rest.constant_value())
        # cand may carry extra squarefree junk: retry with square part only
        last_obstruction = rest
    raise NotASquareError(
        f"{p.to_text()} is not a rational multiple of a perfect square",
        obstruction=last_obstruction,
    )
