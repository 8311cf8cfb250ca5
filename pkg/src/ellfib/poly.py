"""Sparse exact polynomials in two variables s, t.

A polynomial is a dict mapping exponent pairs (es, et) to nonzero
Fraction coefficients; the zero polynomial is the empty dict.  Keeping
the representation canonical (no zero coefficients stored) makes
equality plain dict equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

from .errors import ZeroPolynomial

Exponent = Tuple[int, int]
Poly = Dict[Exponent, Fraction]


def zero() -> Poly:
    return {}


def monomial(coeff, es: int = 0, et: int = 0) -> Poly:
    c = Fraction(coeff)
    if c == 0:
        return {}
    if es < 0 or et < 0:
        raise ValueError("exponents must be nonnegative")
    return {(es, et): c}


def const(coeff) -> Poly:
    return monomial(coeff, 0, 0)


def is_zero(p: Poly) -> bool:
    return not p


def add(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, Fraction(0)) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def neg(p: Poly) -> Poly:
    return {e: -c for e, c in p.items()}


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def scale(p: Poly, coeff) -> Poly:
    c = Fraction(coeff)
    if c == 0:
        return {}
    return {e: cc * c for e, cc in p.items()}


def mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for (a1, a2), c in p.items():
        for (b1, b2), d in q.items():
            e = (a1 + b1, a2 + b2)
            s = out.get(e, Fraction(0)) + c * d
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def power(p: Poly, n: int) -> Poly:
    if n < 0:
        raise ValueError("negative power")
    out = const(1)
    for _ in range(n):
        out = mul(out, p)
    return out


def axis_valuation(p: Poly, axis: str) -> int:
    """Largest k such that s^k (axis "s") or t^k (axis "t") divides p."""
    if not p:
        raise ZeroPolynomial("the zero polynomial has no valuation")
    if axis not in ("s", "t"):
        raise ValueError(f"axis must be 's' or 't', got {axis!r}")
    idx = 0 if axis == "s" else 1
    return min(e[idx] for e in p)


def origin_multiplicity(p: Poly) -> int:
    """Smallest total degree of a monomial of p."""
    if not p:
        raise ZeroPolynomial("the zero polynomial has no multiplicity")
    return min(es + et for es, et in p)


def render(p: Poly) -> str:
    """Canonical text form, parseable by the description-file reader."""
    if not p:
        return "0"
    terms = []
    for (es, et) in sorted(p, key=lambda e: (-(e[0] + e[1]), -e[0])):
        c = p[(es, et)]
        factors = []
        if es:
            factors.append("s" if es == 1 else f"s^{es}")
        if et:
            factors.append("t" if et == 1 else f"t^{et}")
        mag = abs(c)
        if not factors or mag != 1:
            factors.insert(0, str(mag))
        body = "*".join(factors)
        terms.append((c < 0, body))
    first_neg, first_body = terms[0]
    out = ("-" if first_neg else "") + first_body
    for is_neg, body in terms[1:]:
        out += (" - " if is_neg else " + ") + body
    return out
