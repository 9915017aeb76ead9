"""Exact rational functions (quotients of Polynomials), reduced via gcd."""

from __future__ import annotations

from fractions import Fraction

from .gcdtools import exact_divide, poly_gcd
from .poly import Polynomial


class RatFunc:
    """num/den with den != 0, kept reduced and den-normalized (primitive,
    positive leading coefficient)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial | None = None):
        if den is None:
            den = Polynomial.constant(1)
        if isinstance(num, (int, Fraction)):
            num = Polynomial.constant(num)
        if isinstance(den, (int, Fraction)):
            den = Polynomial.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Polynomial.zero(), Polynomial.constant(1)
        else:
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = exact_divide(num, g)
                den = exact_divide(den, g)
            # make the denominator primitive with positive leading coefficient
            cont = den.content()
            if den.leading_coeff_grlex() < 0:
                cont = -cont
            if cont != 1:
                num = num.scale_divide(cont)
                den = den.scale_divide(cont)
        object.__setattr__(self, "num", num.canonical())
        object.__setattr__(self, "den", den.canonical())

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def of(cls, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, Polynomial):
            return cls(value)
        return cls(Polynomial.constant(value))

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not polynomial")
        return self.num.scale_divide(self.den.constant_value())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        other = RatFunc.of(other)
        return self.num * other.den == other.num * self.den

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __add__(self, other):
        other = RatFunc.of(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-RatFunc.of(other))

    def __rsub__(self, other):
        return RatFunc.of(other) + (-self)

    def __mul__(self, other):
        other = RatFunc.of(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFunc.of(other)
        if other.num.is_zero():
            raise ZeroDivisionError
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RatFunc.of(other) / self

    def derivative(self, var: str) -> "RatFunc":
        return RatFunc(
            self.num.derivative(var) * self.den - self.num * self.den.derivative(var),
            self.den * self.den,
        )

    def substitute(self, assignment) -> "RatFunc":
        num = self.num
        den = self.den
        polyassign = {}
        for v, val in assignment.items():
            if isinstance(val, RatFunc):
                raise TypeError("substitute rational values via compose()")
            polyassign[v] = val
        return RatFunc(num.substitute(polyassign), den.substitute(polyassign))

    def eval_exact(self, assignment) -> Fraction:
        d = Fraction(self.den.eval_exact(assignment))
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {assignment}")
        return Fraction(self.num.eval_exact(assignment)) / d

    def eval_float(self, assignment) -> float:
        return self.num.eval_float(assignment) / self.den.eval_float(assignment)

    def eval_complex(self, assignment) -> complex:
        return self.num.eval_complex(assignment) / self.den.eval_complex(assignment)

    def to_text(self) -> str:
        if self.is_polynomial():
            return self.as_polynomial().to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __repr__(self):
        return f"RatFunc({self.to_text()!r})"


def substitute_ratfuncs(p: Polynomial, assignment: dict) -> RatFunc:
    """Exact substitution of RatFunc values into a Polynomial."""
    result = RatFunc.of(0)
    cache: dict[str, list] = {}

    def power(v, e):
        vals = cache.setdefault(v, [RatFunc.of(1)])
        while len(vals) <= e:
            vals.append(vals[-1] * assignment[v])
        return vals[e]

    for exps, c in p.terms.items():
        term = RatFunc.of(Polynomial.constant(c))
        for v, e in zip(p.variables, exps):
            if e == 0:
                continue
            if v in assignment:
                term = term * power(v, e)
            else:
                term = term * RatFunc.of(Polynomial.variable(v) ** e)
        result = result + term
    return result
