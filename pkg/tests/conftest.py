from fractions import Fraction

import hypothesis.strategies as st

from hjburgers.polyalg import Polynomial


@st.composite
def rational_polys(draw, variables=("x",), max_terms=5, max_exp=4, coeff_bound=9):
    n = len(variables)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.integers(0, max_exp)) for _ in range(n))
        num = draw(st.integers(-coeff_bound, coeff_bound))
        den = draw(st.integers(1, 4))
        terms[exps] = terms.get(exps, 0) + Fraction(num, den)
    return Polynomial(variables, terms)


@st.composite
def nonzero_polys(draw, **kw):
    p = draw(rational_polys(**kw))
    if p.is_zero():
        vs = kw.get("variables", ("x",))
        p = p + Polynomial((vs[0],), {(1,): 1})
    return p
