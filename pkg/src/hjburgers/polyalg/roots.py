"""Univariate root finding: exact real isolation + complex conjugate pairs.

Real roots are isolated with Descartes'-rule (Vincent-Collins-Akritas)
bisection over Z and refined by exact rational bisection to any requested
width.  Complex conjugate pairs are located by a damped Aberth-Ehrlich
simultaneous iteration in double precision on the square-free part;
multiplicities come from the square-free decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .gcdtools import yun_squarefree
from .poly import Polynomial


class RootError(ValueError):
    pass


class WidthError(RootError):
    """Requested width is below what the complex solver achieved."""

    def __init__(self, requested: float, achieved: float):
        super().__init__(
            f"requested pair width {requested:g} below achievable precision; "
            f"achieved {achieved:g}"
        )
        self.requested = requested
        self.achieved = achieved


NEAR_REAL_ETA = 1e-8


@dataclass(frozen=True)
class RealRoot:
    lo: Fraction
    hi: Fraction
    multiplicity: int

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def value(self) -> float:
        return float(self.midpoint())


@dataclass(frozen=True)
class ComplexPair:
    """Conjugate pair a +/- i*eta with eta > 0."""

    a: float
    eta: float
    multiplicity: int
    near_real: bool = False


@dataclass
class RootSet:
    degree: int
    real_roots: list = field(default_factory=list)
    complex_pairs: list = field(default_factory=list)

    def total_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.real_roots) + 2 * sum(
            p.multiplicity for p in self.complex_pairs
        )

    def real_values(self) -> list:
        return [r.value() for r in self.real_roots]


# -- integer polynomial helpers (coefficients ascending) --------------------------


def _int_coeffs(p: Polynomial, var: str) -> list:
    """Clear denominators of a univariate polynomial; ascending int list."""
    coeffs = [Fraction(c.constant_value()) for c in p.coefficients_in(var)]
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    out = [int(c * den) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def _variations(c: list) -> int:
    count = 0
    prev = 0
    for a in c:
        if a == 0:
            continue
        s = 1 if a > 0 else -1
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _taylor_shift_1(c: list) -> list:
    c = list(c)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _descartes_01(c: list) -> int:
    """Sign-variation bound on the number of roots in the open interval (0,1)."""
    rev = list(reversed(c))
    return _variations(_taylor_shift_1(rev))


def _eval_int_at_fraction(c: list, x: Fraction) -> int:
    """Sign-faithful integer evaluation: p(x) * den^deg via homogenized Horner."""
    num, den = x.numerator, x.denominator
    n = len(c) - 1
    acc = c[n]
    dpow = 1
    for k in range(n - 1, -1, -1):
        dpow *= den
        acc = acc * num + c[k] * dpow
    return acc


def _root_bound(c: list) -> int:
    """Cauchy bound rounded up to a power of two (strict upper bound on |roots|)."""
    lead = abs(c[-1])
    m = max(abs(a) for a in c[:-1]) if len(c) > 1 else 0
    bound = 1 + m / lead
    b = 1
    while b < bound:
        b *= 2
    return b


def _deflate_root_at_1(c: list) -> list:
    """Exact synthetic division of c by (x - 1); requires c(1) == 0."""
    out = [0] * (len(c) - 1)
    acc = c[-1]
    for k in range(len(c) - 2, -1, -1):
        out[k] = acc
        acc = acc + c[k]
    if acc != 0:
        raise RootError("deflation at 1 with nonzero remainder")
    return out


def _isolate_positive(c: list, bound: int) -> list:
    """Isolating intervals (lo, hi) or exact [r, r] for roots in (0, bound);
    c squarefree with c[0] != 0."""
    # q(x) = p(bound * x): roots in (0,1) correspond to roots in (0, bound)
    q = [a * (bound**k) for k, a in enumerate(c)]
    out = []
    stack = [(q, Fraction(0), Fraction(bound))]
    while stack:
        cur, lo, hi = stack.pop()
        v = _descartes_01(cur)
        if v == 0:
            continue
        if v == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        m = len(cur) - 1
        # left half: 2^m * cur(x/2); right half: the left shifted by 1
        left = [a << (m - k) for k, a in enumerate(cur)]
        right = _taylor_shift_1(left)
        if right[0] == 0:
            # exact root at the midpoint: record once and deflate both halves
            out.append((mid, mid))
            right = right[1:]
            left = _deflate_root_at_1(left)
        stack.append((left, lo, mid))
        stack.append((right, mid, hi))
    return sorted(out)


def _strip_zero_roots(c: list) -> tuple:
    """Return (k, stripped) with c = x^k * stripped and stripped[0] != 0."""
    k = 0
    while c and c[0] == 0:
        c = c[1:]
        k += 1
    return k, c


def _isolate_nonzero(c: list) -> list:
    """Isolating intervals for all nonzero real roots; requires c[0] != 0."""
    if len(c) <= 1:
        return []
    out = list(_isolate_positive(c, _root_bound(c)))
    neg = [a if i % 2 == 0 else -a for i, a in enumerate(c)]
    for lo, hi in _isolate_positive(neg, _root_bound(neg)):
        out.append((-hi, -lo))
    return sorted(out)


def isolate_real_roots(p: Polynomial, var: str | None = None) -> list:
    """Disjoint isolating intervals [(lo, hi), ...] for all real roots of a
    square-free univariate polynomial; exact roots returned as lo == hi."""
    var = var or _only_variable(p)
    c = _int_coeffs(p, var)
    if not c:
        raise RootError("zero polynomial has no well-defined roots")
    k, stripped = _strip_zero_roots(c)
    out = [(Fraction(0), Fraction(0))] if k else []
    out.extend(_isolate_nonzero(stripped))
    return sorted(out)


def refine_interval(c_or_p, interval: tuple, width: Fraction | float, var: str | None = None) -> tuple:
    """Shrink an isolating interval by rational bisection until hi-lo <= width."""
    if isinstance(c_or_p, Polynomial):
        c = _int_coeffs(c_or_p, var or _only_variable(c_or_p))
    else:
        c = list(c_or_p)
    lo, hi = interval
    if lo == hi:
        return (lo, hi)
    w = Fraction(width) if not isinstance(width, Fraction) else width
    if w <= 0:
        raise RootError("width must be positive")
    s_lo = _sign(_eval_int_at_fraction(c, lo))
    s_hi = _sign(_eval_int_at_fraction(c, hi))
    # an endpoint may be a root of a neighbouring factor: move inward until
    # the interval brackets its unique interior root
    if s_lo == 0 or s_hi == 0:
        off = (hi - lo) / 4
        while True:
            a = lo + off if s_lo == 0 else lo
            b = hi - off if s_hi == 0 else hi
            s_a = _sign(_eval_int_at_fraction(c, a)) if s_lo == 0 else s_lo
            s_b = _sign(_eval_int_at_fraction(c, b)) if s_hi == 0 else s_hi
            if s_a == 0:
                return (a, a)
            if s_b == 0:
                return (b, b)
            if s_a != s_b:
                lo, hi, s_lo, s_hi = a, b, s_a, s_b
                break
            off = off / 2
    if s_lo == s_hi:
        raise RootError(f"interval ({lo}, {hi}) does not bracket a sign change")
    while hi - lo > w:
        mid = (lo + hi) / 2
        s_mid = _sign(_eval_int_at_fraction(c, mid))
        if s_mid == 0:
            return (mid, mid)
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return (lo, hi)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _only_variable(p: Polynomial) -> str:
    used = p.used_variables()
    if len(used) > 1:
        raise RootError(f"univariate polynomial required, got variables {used}")
    return used[0] if used else "x"


# -- Aberth-Ehrlich ----------------------------------------------------------------


def aberth_roots(coeffs: list, tol: float = 1e-14, max_iter: int = 400) -> np.ndarray:
    """All complex roots of a (preferably square-free) polynomial given by
    ascending float coefficients, via damped Aberth-Ehrlich iteration."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size < 2:
        return np.zeros(0, dtype=complex)
    c = c / c[-1]
    n = c.size - 1
    radius = 1.0 + float(np.max(np.abs(c[:-1])))
    k = np.arange(n)
    z = radius ** ((k + 1) / n) / radius ** (0.5) * np.exp(
        2j * np.pi * (k / n + 0.2632)
    )
    dc = c[1:] * np.arange(1, n + 1)
    for _ in range(max_iter):
        pz = np.polyval(c[::-1], z)
        dpz = np.polyval(dc[::-1], z)
        dpz = np.where(dpz == 0, 1e-300, dpz)
        w = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = w / denom
        # damping: cap the step to the current scale to avoid orbit blow-up
        scale = 1.0 + np.abs(z)
        mag = np.abs(step)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            capped = step * (scale / np.where(mag == 0, 1.0, mag))
        step = np.where(mag > scale, capped, step)
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            break
    # Newton polish
    for _ in range(3):
        pz = np.polyval(c[::-1], z)
        dpz = np.polyval(dc[::-1], z)
        dpz = np.where(dpz == 0, 1e-300, dpz)
        z = z - pz / dpz
    return z


# -- public entry point ---------------------------------------------------------------


def roots(
    p: Polynomial,
    var: str | None = None,
    real_width: float = 1e-12,
    pair_width: float = 1e-10,
) -> RootSet:
    """Isolate all roots of a univariate polynomial with rational coefficients.

    Real roots: exact isolating intervals refined to `real_width`.
    Complex conjugate pairs: located to `pair_width` (double precision);
    pairs with eta < 1e-8 are flagged near-real rather than silently
    classified.  Multiplicities come from the square-free decomposition.
    """
    if p.is_zero():
        raise RootError("zero polynomial has no well-defined roots")
    var = var or _only_variable(p)
    deg = p.degree(var)
    rs = RootSet(degree=deg)
    if deg == 0:
        return rs
    factors = yun_squarefree(p, var)
    for factor, mult in factors:
        fdeg = factor.degree(var)
        c = _int_coeffs(factor, var)
        k, stripped = _strip_zero_roots(c)
        n_real = k
        if k:
            rs.real_roots.append(RealRoot(Fraction(0), Fraction(0), mult))
        intervals = _isolate_nonzero(stripped)
        n_real += len(intervals)
        for iv in intervals:
            lo, hi = refine_interval(stripped, iv, Fraction(real_width))
            rs.real_roots.append(RealRoot(lo, hi, mult))
        n_pairs = (fdeg - n_real) // 2
        if n_pairs:
            rs.complex_pairs.extend(_complex_pairs(stripped, n_pairs, mult, pair_width))
    rs.real_roots.sort(key=lambda r: r.midpoint())
    rs.complex_pairs.sort(key=lambda q: (q.a, q.eta))
    if rs.total_multiplicity() != deg:
        raise RootError(
            f"root multiplicities {rs.total_multiplicity()} != degree {deg}"
        )
    return rs


def _complex_pairs(c: list, n_pairs: int, mult: int, pair_width: float) -> list:
    fc = [float(a) for a in c]
    z = aberth_roots(fc)
    # the 2*n_pairs roots furthest from the real axis are the complex ones
    order = np.argsort(-np.abs(z.imag))
    complex_part = z[order[: 2 * n_pairs]]
    ups = np.sort_complex(complex_part[complex_part.imag > 0])
    if ups.size != n_pairs:
        # conjugate symmetry lost numerically: rebuild from magnitude pairing
        half = np.sort_complex(complex_part)[:n_pairs]
        ups = np.abs(half.real) + 1j * np.abs(half.imag)
    # achieved accuracy estimate from the Newton correction
    dc = [k * fc[k] for k in range(1, len(fc))]
    achieved = 0.0
    out = []
    for zk in ups:
        pz = _horner_c(fc, zk)
        dpz = _horner_c(dc, zk) if dc else 1.0
        err = abs(pz / dpz) if dpz else float("inf")
        achieved = max(achieved, err)
        eta = abs(zk.imag)
        out.append(
            ComplexPair(
                a=float(zk.real),
                eta=float(eta),
                multiplicity=mult,
                near_real=eta < NEAR_REAL_ETA,
            )
        )
    if achieved > pair_width:
        raise WidthError(requested=pair_width, achieved=achieved)
    return out


def _horner_c(c: list, z: complex) -> complex:
    acc = 0j
    for a in reversed(c):
        acc = acc * z + a
    return acc


def real_roots_in(
    p: Polynomial,
    lo,
    hi,
    var: str | None = None,
    width: float = 1e-12,
) -> list:
    """Refined real roots of the square-free part inside [lo, hi] (floats)."""
    var = var or _only_variable(p)
    from .gcdtools import squarefree_part

    sf = squarefree_part(p, var)
    c = _int_coeffs(sf, var)
    k, stripped = _strip_zero_roots(c)
    lo_f, hi_f = Fraction(lo), Fraction(hi)
    out = [Fraction(0)] if (k and lo_f <= 0 <= hi_f) else []
    for iv in _isolate_nonzero(stripped):
        a, b = refine_interval(stripped, iv, Fraction(width))
        mid = (a + b) / 2
        if lo_f <= mid <= hi_f:
            out.append(mid)
    return sorted(out)
