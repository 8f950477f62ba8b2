"""Exact rational arithmetic helpers.

All certified computations in this package use arbitrary-precision rationals.
We use gmpy2.mpq when available (much faster than fractions.Fraction for the
large LP verifications), falling back to the stdlib otherwise.  Both types are
always kept in canonical form (gcd 1, positive denominator) by construction.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Q  # type: ignore
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q  # type: ignore


def rat(p, q=None):
    """Build a rational from ints, a 'p/q' string, or pass one through."""
    if q is not None:
        return Q(p, q)
    if isinstance(p, str):
        s = p.strip()
        if "/" in s:
            num, den = s.split("/")
            return Q(int(num), int(den))
        return Q(int(s))
    return Q(p)


def fmt(x) -> str:
    """Render a rational as 'p/q' with q >= 1 (plain integer when q == 1)."""
    x = Q(x)
    n, d = x.numerator, x.denominator
    if d == 1:
        return str(n)
    return f"{n}/{d}"


def from_float(x: float, max_den: int = 10**6):
    """Best rational approximation of x with denominator <= max_den.

    Used only for float-triage rationalization; every value produced this way
    must be re-verified exactly before being reported.
    """
    from fractions import Fraction

    f = Fraction(x).limit_denominator(max_den)
    return Q(f.numerator, f.denominator)
