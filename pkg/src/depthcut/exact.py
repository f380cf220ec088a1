"""Exact rational scalars.

Every coordinate in the package is an arbitrary-precision rational.  When
gmpy2 is importable its ``mpq`` type is used; otherwise the standard
library ``Fraction`` stands in.  The two are never mixed inside one process.
"""

from __future__ import annotations

from fractions import Fraction

try:  # pragma: no cover - depends on environment
    from gmpy2 import mpq as _mpq

    Q = _mpq
    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    Q = Fraction
    HAVE_GMPY2 = False

ZERO = Q(0)
ONE = Q(1)
HALF = Q(1, 2)


def parse(value) -> "Q":
    """Convert a decimal string, "p/q" string, int or rational to ``Q``.

    Floats are rejected so that no rounding can sneak in on ingestion.
    """
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a decimal string")
    if isinstance(value, str):
        f = Fraction(value.strip())
        return Q(f.numerator, f.denominator)
    if isinstance(value, int):
        return Q(value)
    if isinstance(value, Fraction):
        return Q(value.numerator, value.denominator)
    # gmpy2 mpq or anything exposing numerator/denominator
    return Q(int(value.numerator), int(value.denominator))


def fmt(q) -> str:
    """Exact string form: a finite decimal when one exists, else ``p/q``."""
    num = int(q.numerator)
    den = int(q.denominator)
    if den == 1:
        return str(num)
    d = den
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{num}/{den}"
    k = max(twos, fives)
    scaled = num * (10**k // den)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(k + 1, "0")
    head, tail = digits[:-k], digits[-k:].rstrip("0")
    return f"{sign}{head}.{tail}" if tail else f"{sign}{head}"


def sign(q) -> int:
    return (q > 0) - (q < 0)


def to_float(q) -> float:
    return float(q)
