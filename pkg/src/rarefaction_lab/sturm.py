"""Sturm sequences over the integers.

Floating-point coefficients are dyadic rationals, so a common power of two turns
them into integers without rounding. Remainders are computed as positive
pseudo-remainders reduced to their primitive part, which keeps the Sturm sign
structure intact and the integers reasonably small. Counts are therefore exact
for the polynomial actually represented by the floats.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

# Polynomials are lists of ints, lowest degree first, no trailing zeros.
IntPoly = list


def strip(p: IntPoly) -> IntPoly:
    while p and p[-1] == 0:
        p.pop()
    return p


def from_floats(coeffs) -> IntPoly:
    """Exact integer polynomial proportional (positive factor) to float coefficients."""
    return from_fractions([Fraction(float(c)) for c in coeffs])


def from_fractions(coeffs) -> IntPoly:
    coeffs = [Fraction(c) for c in coeffs]
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    return strip([int(c * den) for c in coeffs])


def derivative(p: IntPoly) -> IntPoly:
    return strip([k * p[k] for k in range(1, len(p))])


def primitive(p: IntPoly) -> IntPoly:
    g = 0
    for c in p:
        g = gcd(g, c)
        if g == 1:
            return p
    return [c // g for c in p] if g > 1 else p


def positive_prem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Remainder of a by b times a positive integer."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    sb = 1 if lb > 0 else -1
    alb = abs(lb)
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [alb * c for c in r]
        f = sb * lr
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        strip(r)
    return r


def sturm_chain(p: IntPoly) -> list[IntPoly]:
    p = primitive(strip(list(p)))
    if not p:
        return []
    chain = [p]
    dp = derivative(p)
    if not dp:
        return chain
    chain.append(primitive(dp))
    while True:
        r = positive_prem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(primitive([-c for c in r]))
    return chain


def sign_at(p: IntPoly, num: int, den: int) -> int:
    """Sign of p(num/den) for den > 0."""
    deg = len(p) - 1
    total = 0
    npow = 1
    dpow = den ** deg
    for c in p:
        total += c * npow * dpow
        npow *= num
        dpow //= den
    return (total > 0) - (total < 0)


def variations(chain: list[IntPoly], num: int, den: int) -> int:
    v = 0
    last = 0
    for p in chain:
        s = sign_at(p, num, den)
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def as_ratio(x) -> tuple[int, int]:
    f = Fraction(x)
    return f.numerator, f.denominator


def count_in_half_open(chain: list[IntPoly], a, b) -> int:
    """Distinct roots in (a, b] for a < b."""
    na, da = as_ratio(a)
    nb, db = as_ratio(b)
    return variations(chain, na, da) - variations(chain, nb, db)


def is_squarefree(chain: list[IntPoly]) -> bool:
    return bool(chain) and len(chain[-1]) == 1


def value_sign(p: IntPoly, x) -> int:
    num, den = as_ratio(x)
    return sign_at(p, num, den)
