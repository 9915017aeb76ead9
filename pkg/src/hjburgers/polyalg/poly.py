"""Sparse multivariate polynomials over Q with a fixed canonical form.

Coefficients are exact rationals (stored as int when integral, else
Fraction); no floats ever enter a Polynomial.  The canonical form fixes

  * the variable order  x0 < x0c < lam < x < y < z < t < c  (names not in
    this list sort after it, alphabetically), and
  * the graded-lexicographic monomial order induced by it,

so equality is decidable by term-map comparison and serialized output is
byte-reproducible.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

Coeff = Union[int, Fraction]

#: Documented canonical variable order; unknown names sort after, alphabetically.
KNOWN_VARIABLE_ORDER = ("x0", "x0c", "lam", "x", "y", "z", "t", "c")

_KNOWN_INDEX = {name: i for i, name in enumerate(KNOWN_VARIABLE_ORDER)}


def variable_key(name: str) -> tuple:
    """Sort key implementing the canonical variable order."""
    i = _KNOWN_INDEX.get(name)
    if i is not None:
        return (0, i, "")
    return (1, 0, name)


def _norm_coeff(c: Coeff) -> Coeff:
    if isinstance(c, bool):
        raise TypeError("bool is not a polynomial coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class ExactnessError(TypeError):
    """Raised when an inexact (float) value would enter exact arithmetic."""


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping[tuple, Coeff]):
        vs = tuple(variables)
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate variables in {vs}")
        order = sorted(range(len(vs)), key=lambda i: variable_key(vs[i]))
        svs = tuple(vs[i] for i in order)
        out: dict[tuple, Coeff] = {}
        for exps, coeff in terms.items():
            if len(exps) != len(vs):
                raise ValueError(f"exponent vector {exps} has wrong length for {vs}")
            if any((not isinstance(e, int)) or e < 0 for e in exps):
                raise ValueError(f"exponents must be nonnegative ints: {exps}")
            c = _norm_coeff(coeff)
            if c == 0:
                continue
            key = tuple(exps[i] for i in order)
            prev = out.get(key)
            if prev is None:
                out[key] = c
            else:
                s = prev + c
                if s:
                    out[key] = s
                else:
                    del out[key]
        object.__setattr__(self, "variables", svs)
        object.__setattr__(self, "terms", out)

    # -- trusted fast constructor -------------------------------------------------

    @classmethod
    def _make(cls, variables: tuple, terms: dict) -> "Polynomial":
        """Build without validation; variables must already be canonically sorted
        and terms free of zeros / un-normalized Fractions."""
        p = object.__new__(cls)
        object.__setattr__(p, "variables", variables)
        object.__setattr__(p, "terms", terms)
        return p

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (_rebuild_polynomial, (self.variables, dict(self.terms)))

    # -- constructors ---------------------------------------------------------------

    @classmethod
    def zero(cls, variables: Iterable[str] = ()) -> "Polynomial":
        return cls(variables, {})

    @classmethod
    def constant(cls, c: Coeff, variables: Iterable[str] = ()) -> "Polynomial":
        vs = tuple(variables)
        return cls(vs, {(0,) * len(vs): c})

    @classmethod
    def variable(cls, name: str) -> "Polynomial":
        return cls((name,), {(1,): 1})

    # -- basic structure -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self) -> Coeff:
        """Value of a constant polynomial (0 for the zero polynomial)."""
        if not self.terms:
            return 0
        [(exps, c)] = self.terms.items()
        if any(exps):
            raise ValueError(f"{self} is not constant")
        return c

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var: str | None = None) -> int:
        """Degree in `var` (total degree if None); -1 for the zero polynomial."""
        if var is None:
            return self.total_degree()
        if not self.terms:
            return -1
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max(e[i] for e in self.terms)

    def used_variables(self) -> tuple:
        """Variables with a nonzero exponent somewhere."""
        used = [False] * len(self.variables)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def canonical(self) -> "Polynomial":
        """Drop unused variables (canonical minimal form)."""
        keep = self.used_variables()
        if keep == self.variables:
            return self
        idx = [self.variables.index(v) for v in keep]
        terms = {tuple(e[i] for i in idx): c for e, c in self.terms.items()}
        return Polynomial._make(keep, terms)

    # -- alignment ------------------------------------------------------------------

    def _aligned_with(self, other: "Polynomial"):
        if self.variables == other.variables:
            return self.variables, self.terms, other.terms
        union = sorted(set(self.variables) | set(other.variables), key=variable_key)
        union = tuple(union)
        return union, self._remap(union), other._remap(union)

    def _remap(self, union: tuple) -> dict:
        if union == self.variables:
            return self.terms
        pos = [union.index(v) for v in self.variables]
        n = len(union)
        out = {}
        for exps, c in self.terms.items():
            key = [0] * n
            for p, e in zip(pos, exps):
                key[p] = e
            out[tuple(key)] = c
        return out

    def with_variables(self, variables: Iterable[str]) -> "Polynomial":
        """Re-express over a superset of variables (canonically sorted)."""
        union = tuple(sorted(set(variables) | set(self.variables), key=variable_key))
        return Polynomial._make(union, self._remap(union))

    # -- arithmetic -------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        vs, a, b = self._aligned_with(other)
        return a == b

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial._make(self.variables, {e: -c for e, c in self.terms.items()})

    def _add_sub(self, other, sign: int) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.variables)
        if not isinstance(other, Polynomial):
            return NotImplemented
        vs, a, b = self._aligned_with(other)
        out = dict(a)
        for e, c in b.items():
            prev = out.get(e)
            s = (prev + sign * c) if prev is not None else sign * c
            if s:
                out[e] = s
            elif prev is not None:
                del out[e]
        return Polynomial._make(vs, out)

    def __add__(self, other):
        return self._add_sub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._add_sub(other, -1)

    def __rsub__(self, other):
        return (-self)._add_sub(other, 1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _norm_coeff(other)
            if c == 0:
                return Polynomial._make(self.variables, {})
            return Polynomial._make(
                self.variables, {e: _norm_coeff(k * c) for e, k in self.terms.items()}
            )
        if not isinstance(other, Polynomial):
            return NotImplemented
        vs, a, b = self._aligned_with(other)
        if len(a) > len(b):
            a, b = b, a
        out: dict[tuple, Coeff] = {}
        get = out.get
        for ea, ca in a.items():
            for eb, cb in b.items():
                key = tuple(map(sum, zip(ea, eb)))
                prev = get(key)
                if prev is None:
                    out[key] = ca * cb
                else:
                    s = prev + ca * cb
                    if s:
                        out[key] = s
                    else:
                        del out[key]
        if any(isinstance(c, Fraction) for c in out.values()):
            out = {e: _norm_coeff(c) for e, c in out.items()}
            out = {e: c for e, c in out.items() if c}
        return Polynomial._make(vs, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of polynomial by zero scalar")
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative ints")
        result = Polynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r})"

    # -- calculus / evaluation ---------------------------------------------------------

    def derivative(self, var: str, n: int = 1) -> "Polynomial":
        if var not in self.variables:
            return Polynomial._make(self.variables, {})
        i = self.variables.index(var)
        terms = self.terms
        for _ in range(n):
            out = {}
            for exps, c in terms.items():
                e = exps[i]
                if e:
                    key = exps[:i] + (e - 1,) + exps[i + 1 :]
                    nc = c * e
                    prev = out.get(key)
                    out[key] = nc if prev is None else prev + nc
            terms = {k: v for k, v in out.items() if v}
        return Polynomial._make(self.variables, terms)

    def substitute(self, assignment: Mapping[str, "Polynomial | Coeff"]) -> "Polynomial":
        """Exact substitution of polynomials/rationals for variables."""
        relevant = {v: p for v, p in assignment.items() if v in self.variables}
        if not relevant:
            return self
        keep = tuple(v for v in self.variables if v not in relevant)
        result = Polynomial.zero(keep)
        powers: dict[str, list] = {}

        def power_of(v, e):
            cache = powers.setdefault(v, [Polynomial.constant(1)])
            while len(cache) <= e:
                val = relevant[v]
                if isinstance(val, (int, Fraction)):
                    val = Polynomial.constant(val)
                cache.append(cache[-1] * val)
            return cache[e]

        for exps, c in self.terms.items():
            term = Polynomial.constant(c, keep)
            for v, e in zip(self.variables, exps):
                if e == 0:
                    continue
                if v in relevant:
                    term = term * power_of(v, e)
                else:
                    term = term * Polynomial((v,), {(1,): 1}) ** e
            result = result + term
        return result

    def eval_exact(self, assignment: Mapping[str, Coeff]) -> Coeff:
        """Evaluate at exact rational values for all used variables."""
        missing = [v for v in self.used_variables() if v not in assignment]
        if missing:
            raise ValueError(f"missing values for variables {missing}")
        vals = [assignment.get(v, 0) for v in self.variables]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = Fraction(c)
            for val, e in zip(vals, exps):
                if e:
                    term *= Fraction(val) ** e
            total += term
        return _norm_coeff(total)

    def eval_float(self, assignment: Mapping[str, float]) -> float:
        """Float evaluation (the only place inexactness is allowed);
        terms are accumulated with math.fsum for stability."""
        missing = [v for v in self.used_variables() if v not in assignment]
        if missing:
            raise ValueError(f"missing values for variables {missing}")
        vals = [float(assignment.get(v, 0.0)) for v in self.variables]
        pieces = []
        for exps, c in self.terms.items():
            term = float(c)
            for val, e in zip(vals, exps):
                if e:
                    term *= val**e
            pieces.append(term)
        return math.fsum(pieces)

    def eval_float_scaled(self, assignment: Mapping[str, float]) -> tuple:
        """(value, scale): float value together with the sum of term
        magnitudes, for honest relative-residual checks."""
        vals = [float(assignment.get(v, 0.0)) for v in self.variables]
        total = 0.0
        scale = 0.0
        for exps, c in self.terms.items():
            term = float(c)
            for val, e in zip(vals, exps):
                if e:
                    term *= val**e
            total += term
            scale += abs(term)
        return total, max(scale, 1e-300)

    def eval_complex(self, assignment: Mapping[str, complex]) -> complex:
        vals = [complex(assignment.get(v, 0.0)) for v in self.variables]
        total = 0j
        for exps, c in self.terms.items():
            term = complex(c)
            for val, e in zip(vals, exps):
                if e:
                    term *= val**e
            total += term
        return total

    # -- univariate views ----------------------------------------------------------------

    def coefficients_in(self, var: str) -> list:
        """Dense coefficient list in `var` (index = exponent), each a Polynomial
        over the remaining variables.  [] for the zero polynomial."""
        if not self.terms:
            return []
        if var not in self.variables:
            return [self]
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1 :]
        deg = max(e[i] for e in self.terms)
        buckets: list[dict] = [dict() for _ in range(deg + 1)]
        for exps, c in self.terms.items():
            buckets[exps[i]][exps[:i] + exps[i + 1 :]] = c
        return [Polynomial._make(rest, b) for b in buckets]

    @staticmethod
    def from_coefficients(var: str, coeffs: list) -> "Polynomial":
        """Inverse of coefficients_in: Σ coeffs[k] * var**k."""
        v = Polynomial.variable(var)
        total = Polynomial.zero((var,))
        for k, ck in enumerate(coeffs):
            if isinstance(ck, (int, Fraction)):
                ck = Polynomial.constant(ck)
            if not ck.is_zero():
                total = total + ck * v**k
        return total

    def leading_coefficient(self, var: str) -> "Polynomial":
        cs = self.coefficients_in(var)
        if not cs:
            return Polynomial.zero()
        return cs[-1]

    # -- graded-lex order helpers ---------------------------------------------------------

    def _grlex_key(self, exps: tuple) -> tuple:
        return (sum(exps), exps)

    def leading_monomial(self) -> tuple:
        """Exponent vector of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=self._grlex_key)

    def leading_coeff_grlex(self) -> Coeff:
        return self.terms[self.leading_monomial()]

    def sorted_terms(self) -> list:
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: self._grlex_key(kv[0]), reverse=True)

    # -- content / normalization --------------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational content (gcd of coefficients); 0 for the zero polynomial."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            f = Fraction(c)
            num = math.gcd(num, abs(f.numerator))
            den = den * f.denominator // math.gcd(den, f.denominator)
        return Fraction(num, den)

    def monomial_content(self) -> tuple:
        """Componentwise minimum exponent vector."""
        if not self.terms:
            return (0,) * len(self.variables)
        mins = None
        for exps in self.terms:
            if mins is None:
                mins = list(exps)
            else:
                mins = [min(a, b) for a, b in zip(mins, exps)]
        return tuple(mins)

    def strip_monomial_content(self) -> "Polynomial":
        mc = self.monomial_content()
        if not any(mc):
            return self
        terms = {tuple(e - m for e, m in zip(exps, mc)): c for exps, c in self.terms.items()}
        return Polynomial._make(self.variables, terms)

    def strip_variable_content(self, var: str) -> "Polynomial":
        """Strip the monomial content in one variable only."""
        if var not in self.variables or not self.terms:
            return self
        i = self.variables.index(var)
        m = min(e[i] for e in self.terms)
        if m == 0:
            return self
        terms = {e[:i] + (e[i] - m,) + e[i + 1 :]: c for e, c in self.terms.items()}
        return Polynomial._make(self.variables, terms)

    def primitive_part(self) -> "Polynomial":
        """Content-1, positive graded-lex leading coefficient; zero stays zero."""
        if not self.terms:
            return self
        cont = self.content()
        if self.leading_coeff_grlex() < 0:
            cont = -cont
        inv = 1 / cont
        return Polynomial._make(
            self.variables, {e: _norm_coeff(c * inv) for e, c in self.terms.items()}
        )

    def normalized(self) -> "Polynomial":
        """Canonical representative: minimal variables + primitive part."""
        return self.canonical().primitive_part()

    def scale_divide(self, c: Coeff) -> "Polynomial":
        if c == 0:
            raise ZeroDivisionError
        inv = Fraction(1) / Fraction(c)
        return Polynomial._make(
            self.variables, {e: _norm_coeff(k * inv) for e, k in self.terms.items()}
        )

    # -- serialization ----------------------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form, e.g. '2*x0^2 - 3/4*x0*t + 1/2'."""
        p = self.canonical()
        if not p.terms:
            return "0"
        parts = []
        for exps, c in p.sorted_terms():
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in zip(p.variables, exps) if e
            )
            f = Fraction(c)
            mag = abs(f)
            coeff_txt = f"{mag.numerator}/{mag.denominator}" if mag.denominator != 1 else f"{mag.numerator}"
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{coeff_txt}*{mono}"
            else:
                body = coeff_txt
            if not parts:
                parts.append(body if f > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if f > 0 else f"- {body}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "Polynomial":
        """Parse the canonical text form (strict: '*' products, '^' powers)."""
        s = text.strip()
        if not s:
            raise ValueError("empty polynomial text")
        if s == "0":
            return cls.zero()
        tokens = s.replace("+", " + ").replace("-", " - ").split()
        total = cls.zero()
        sign = 1
        saw_term = False
        for tok in tokens:
            if tok == "+":
                continue
            if tok == "-":
                sign = -sign
                continue
            total = total + cls._parse_term(tok) * sign
            sign = 1
            saw_term = True
        if not saw_term:
            raise ValueError(f"no terms in polynomial text {text!r}")
        return total.canonical()

    @classmethod
    def _parse_term(cls, chunk: str) -> "Polynomial":
        coeff = Fraction(1)
        factors: dict[str, int] = {}
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed term {chunk!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
            else:
                if "^" in factor:
                    name, _, exp = factor.partition("^")
                    e = int(exp)
                else:
                    name, e = factor, 1
                if not name.isidentifier():
                    raise ValueError(f"bad variable name {name!r} in {chunk!r}")
                if e < 0:
                    raise ValueError(f"negative exponent in {chunk!r}")
                factors[name] = factors.get(name, 0) + e
        vs = tuple(sorted(factors, key=variable_key))
        exps = tuple(factors[v] for v in vs)
        return cls(vs, {exps: coeff})

    def to_json_dict(self) -> dict:
        p = self.canonical()
        return {
            "variables": list(p.variables),
            "terms": [
                {"exps": list(exps), "num": Fraction(c).numerator, "den": Fraction(c).denominator}
                for exps, c in p.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Polynomial":
        vs = tuple(d["variables"])
        terms = {tuple(t["exps"]): Fraction(t["num"], t["den"]) for t in d["terms"]}
        return cls(vs, terms)

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, s: str) -> "Polynomial":
        return cls.from_json_dict(json.loads(s))


def _rebuild_polynomial(variables, terms):
    return Polynomial._make(variables, terms)


def poly(text: str) -> Polynomial:
    """Shorthand parser."""
    return Polynomial.from_text(text)


def variables(*names: str) -> tuple:
    """Convenience: a tuple of variable polynomials."""
    return tuple(Polynomial.variable(n) for n in names)
