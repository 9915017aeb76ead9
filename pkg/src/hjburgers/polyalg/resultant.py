"""Sylvester resultants via fraction-free (Bareiss) elimination, and
discriminants with the conventional sign.

The Sylvester matrix is laid out with the rows of the first argument above
the rows of the second, which fixes the resultant's sign:
R(x-a, x-b; x) = a - b.
"""

from __future__ import annotations

from fractions import Fraction

from .gcdtools import exact_divide
from .poly import Polynomial


class ResultantError(ValueError):
    pass


def sylvester_matrix(p: Polynomial, q: Polynomial, var: str) -> list:
    """Sylvester matrix of p (rows first) and q with respect to var;
    entries are Polynomials over the remaining variables."""
    dp = p.degree(var)
    dq = q.degree(var)
    if dp < 1 or dq < 1:
        raise ResultantError(
            f"resultant requires positive degree in {var!r} "
            f"(got deg p = {dp}, deg q = {dq}); handle constants at the call site"
        )
    pc = p.coefficients_in(var)
    qc = q.coefficients_in(var)
    zero = Polynomial.zero()
    n = dp + dq
    rows = []
    for i in range(dq):
        row = [zero] * n
        for j, c in enumerate(reversed(pc)):
            row[i + j] = c
        rows.append(row)
    for i in range(dp):
        row = [zero] * n
        for j, c in enumerate(reversed(qc)):
            row[i + j] = c
        rows.append(row)
    return rows


def bareiss_determinant(matrix: list) -> Polynomial:
    """Exact determinant of a square matrix of Polynomials
    (fraction-free Gaussian elimination with row pivoting)."""
    n = len(matrix)
    if n == 0:
        return Polynomial.constant(1)
    # align all entries over a common variable tuple once
    all_vars: set = set()
    for row in matrix:
        for e in row:
            all_vars |= set(e.variables)
    m = [[e.with_variables(all_vars) for e in row] for row in matrix]
    sign = 1
    prev = Polynomial.constant(1).with_variables(all_vars)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Polynomial.zero()
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                num = m[i][j] * pivot - mik * m[k][j]
                m[i][j] = exact_divide(num, prev) if not prev.is_constant() else (
                    num.scale_divide(prev.constant_value())
                )
            m[i][k] = Polynomial.zero()
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    """det of the Sylvester matrix of (p, q) in var; rejects degree-0 inputs."""
    return bareiss_determinant(sylvester_matrix(p, q, var))


def resultant_with_constants(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    """resultant extended by the usual convention Res(c, q) = c^deg(q),
    Res(p, c) = c^deg(p), Res(c, d) = 1 for constants."""
    dp, dq = p.degree(var), q.degree(var)
    if dp < 1 and dq < 1:
        return Polynomial.constant(1)
    if dp < 1:
        return p**dq
    if dq < 1:
        return q**dp
    return resultant(p, q, var)


# explicit discriminant formulas for low degree (same value as the
# resultant route; used because the quartic-in-c double discriminant is
# the hot spot)

def _disc_low_degree(coeffs: list, n: int) -> Polynomial:
    if n == 2:
        c0, b, a = coeffs
        return b * b - 4 * a * c0
    if n == 3:
        d, c0, b, a = coeffs
        return (
            18 * a * b * c0 * d
            - 4 * b**3 * d
            + b * b * c0 * c0
            - 4 * a * c0**3
            - 27 * a * a * d * d
        )
    if n == 4:
        e, d, c0, b, a = coeffs
        return (
            256 * a**3 * e**3
            - 192 * a * a * b * d * e * e
            - 128 * a * a * c0 * c0 * e * e
            + 144 * a * a * c0 * d * d * e
            - 27 * a * a * d**4
            + 144 * a * b * b * c0 * e * e
            - 6 * a * b * b * d * d * e
            - 80 * a * b * c0 * c0 * d * e
            + 18 * a * b * c0 * d**3
            + 16 * a * c0**4 * e
            - 4 * a * c0**3 * d * d
            - 27 * b**4 * e * e
            + 18 * b**3 * c0 * d * e
            - 4 * b**3 * d**3
            - 4 * b * b * c0**3 * e
            + b * b * c0 * c0 * d * d
        )
    raise ValueError(n)


def discriminant(p: Polynomial, var: str, force_resultant: bool = False) -> Polynomial:
    """(-1)^(n(n-1)/2) * resultant(p, p', var) / lc, n = deg(p, var).

    Stored polynomials are trim (the leading coefficient in var is never the
    zero polynomial), so the only rejected input is degree < 2.
    """
    n = p.degree(var)
    if n < 2:
        raise ResultantError(f"discriminant requires degree >= 2 in {var!r}, got {n}")
    if 2 <= n <= 4 and not force_resultant:
        return _disc_low_degree(p.coefficients_in(var), n)
    lc = p.leading_coefficient(var)
    res = resultant(p, p.derivative(var), var)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    if lc.is_constant():
        out = res.scale_divide(lc.constant_value())
    else:
        out = exact_divide(res, lc)
    return out if sign == 1 else -out


def resultant_univariate_float(a: list, b: list) -> float:
    """Resultant of two float coefficient lists (ascending order) via the
    numeric Sylvester determinant; used only for float-leaf checks."""
    import numpy as np

    da, db = len(a) - 1, len(b) - 1
    if da < 1 or db < 1:
        raise ResultantError("positive degrees required")
    n = da + db
    m = np.zeros((n, n))
    for i in range(db):
        m[i, i : i + da + 1] = a[::-1]
    for i in range(da):
        m[db + i, i : i + db + 1] = b[::-1]
    return float(np.linalg.det(m))
