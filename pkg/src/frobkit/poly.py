"""Univariate polynomial helpers: construction over a Field and bounded factor search.

Arithmetic (division, gcd, xgcd) comes from flint's ``fmpq_poly`` /
``nmod_poly``. Factor *search* is done here by exhaustive methods with an
explicit degree budget so that "irreducible" is only ever claimed after a
complete search.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import flint

from .linalg import Field

DEFAULT_DEGREE_BUDGET = 6
# cap on divisor tuples tried by Kronecker's method before giving up
_KRONECKER_COMBO_CAP = 200_000
_FP_SEARCH_CAP = 200_000


def make_poly(field: Field, coeffs):
    """Polynomial from low-to-high coefficients."""
    coeffs = [field(c) for c in coeffs]
    if field.p == 0:
        return flint.fmpq_poly(coeffs)
    return flint.nmod_poly([int(c) for c in coeffs], field.p)


def poly_coeffs(field: Field, f) -> list:
    return [field(c) for c in f.coeffs()]


def monic(field: Field, f):
    lc = field(f.coeffs()[-1])
    return make_poly(field, [field(c) / lc for c in f.coeffs()])


def _integer_primitive(f) -> list[int]:
    """Integer primitive coefficient list with the same roots as rational ``f``."""
    cs = [Fraction(int(c.p), int(c.q)) for c in (flint.fmpq(x) for x in f.coeffs())]
    den = math.lcm(*[c.denominator for c in cs])
    ints = [int(c * den) for c in cs]
    g = math.gcd(*ints)
    ints = [i // g for i in ints]
    if ints[-1] < 0:
        ints = [-i for i in ints]
    return ints


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _interpolate(points, values):
    """Lagrange interpolation over Q; returns low-to-high Fractions."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(zip(points, values)):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += yi * basis[k] / denom
    return coeffs


def kronecker_factor(f, max_degree: int = DEFAULT_DEGREE_BUDGET):
    """Search for a nontrivial factor of rational ``f`` by Kronecker's method.

    Returns ``(factor, complete)``: ``factor`` is a monic rational polynomial of
    minimal degree dividing ``f`` (hence irreducible) or None; ``complete`` says
    whether the search covered every candidate, so None with complete=True
    certifies irreducibility.
    """
    ints = _integer_primitive(f)
    n = len(ints) - 1
    if n <= 1:
        return None, True
    if n > max_degree:
        return None, False
    fz = flint.fmpz_poly(ints)
    # points with small nonzero values keep the divisor products small
    candidates = sorted(range(-12, 13), key=lambda a: (abs(int(fz(a))), abs(a)))
    for a in range(-12, 13):
        if int(fz(a)) == 0:
            return flint.fmpq_poly([-a, 1]), True
    fq = flint.fmpq_poly(ints)
    for d in range(1, n // 2 + 1):
        pts = candidates[: d + 1]
        divs = []
        for k, a in enumerate(pts):
            ds = _divisors(int(fz(a)))
            divs.append(ds if k == 0 else [s * v for v in ds for s in (1, -1)])
        total = math.prod(len(x) for x in divs)
        if total > _KRONECKER_COMBO_CAP:
            return None, False
        for vals in itertools.product(*divs):
            g = _interpolate(pts, [Fraction(v) for v in vals])
            while g and g[-1] == 0:
                g.pop()
            if len(g) - 1 != d:
                continue
            if any(c.denominator != 1 for c in g):
                continue
            gq = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in g])
            if (fq % gq).is_zero():
                lc = gq.coeffs()[-1]
                return flint.fmpq_poly([c / lc for c in gq.coeffs()]), True
    return None, True


def fp_factor(f, p: int, max_degree: int = DEFAULT_DEGREE_BUDGET):
    """Exhaustive monic-divisor search over F_p; same contract as kronecker_factor."""
    n = f.degree()
    if n <= 1:
        return None, True
    if n > max_degree:
        return None, False
    for d in range(1, n // 2 + 1):
        if p ** d > _FP_SEARCH_CAP:
            return None, False
        for tail in itertools.product(range(p), repeat=d):
            g = flint.nmod_poly(list(tail) + [1], p)
            if (f % g).is_zero():
                return g, True
    return None, True


def find_factor(field: Field, f, max_degree: int = DEFAULT_DEGREE_BUDGET):
    if field.p == 0:
        return kronecker_factor(f, max_degree)
    return fp_factor(f, field.p, max_degree)
