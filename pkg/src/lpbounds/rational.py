"""Exact rational utilities: parsing, base-2 logarithm brackets, quartic grids.

Everything here is integer/Fraction arithmetic.  Floating point is never
used: quantities like log2(value) are reported as rational *brackets*
[lo, hi] guaranteed to contain the true value, and threshold integers of
the form ceil(c * log2(r)) are resolved by exact power comparisons.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import ParseError

__all__ = [
    "parse_rational",
    "format_rational",
    "power_of_two_exponent",
    "log2_bracket",
    "ceil_mul_log2",
    "floor_fourth_root",
    "largest_fourth_power_at_most",
    "majority_error",
    "min_odd_votes_for_error",
]


def parse_rational(text: str) -> Fraction:
    """Parse ``num/den`` or a plain integer literal into a Fraction.

    Decimal notation is rejected: rationals must be written exactly, e.g.
    ``1/8`` rather than ``0.125``.
    """
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ParseError(
            f"expected a rational in num/den or integer form, got {text!r} "
            "(decimal notation is not accepted; write 1/8 instead of 0.125)"
        )
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(
            f"expected a rational in num/den or integer form, got {text!r}"
        ) from exc


def format_rational(q: Fraction) -> str:
    """Format as ``num/den``, or ``num`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def power_of_two_exponent(r: Fraction) -> int | None:
    """Return k when r == 2**k exactly, else None."""
    if r <= 0:
        return None
    p, q = r.numerator, r.denominator
    if p == 1:
        k = q.bit_length() - 1
        return -k if (1 << k) == q else None
    if q == 1:
        k = p.bit_length() - 1
        return k if (1 << k) == p else None
    return None


def _floor_log2(r: Fraction) -> int:
    """Largest e with 2**e <= r, for r > 0, by exact comparison."""
    p, q = r.numerator, r.denominator
    e = p.bit_length() - q.bit_length()
    # bit_length estimate can be off by one in either direction
    while not _le_pow2(e, p, q):
        e -= 1
    while _le_pow2(e + 1, p, q):
        e += 1
    return e


def _le_pow2(e: int, p: int, q: int) -> bool:
    """2**e <= p/q, exactly."""
    if e >= 0:
        return (q << e) <= p
    return q <= (p << -e)


def log2_bracket(r: Fraction, precision_bits: int = 20) -> tuple[Fraction, Fraction]:
    """Rational bracket [lo, hi] containing log2(r), width <= 2**-precision_bits.

    Exact powers of two yield a zero-width bracket.  Otherwise the bracket
    is produced by interval squaring with outward dyadic rounding; the
    working precision is widened automatically if an intermediate interval
    ever straddles 2.
    """
    if r <= 0:
        raise ValueError(f"log2 bracket requires a positive rational, got {r}")
    exact = power_of_two_exponent(r)
    if exact is not None:
        f = Fraction(exact)
        return (f, f)

    e = _floor_log2(r)
    x = r / Fraction(2) ** e  # in [1, 2)

    work = 2 * precision_bits + 64
    while True:
        result = _log2_fraction_bits(x, precision_bits, work)
        if result is not None:
            frac_bits = result
            lo = e + Fraction(frac_bits, 1 << precision_bits)
            hi = e + Fraction(frac_bits + 1, 1 << precision_bits)
            return (lo, hi)
        work *= 2


def _log2_fraction_bits(x: Fraction, nbits: int, work: int) -> int | None:
    """First nbits binary digits of log2(x) for x in [1,2), or None on a tie.

    Maintains an outward-rounded dyadic interval [lo, hi]/2**work around the
    repeatedly squared value; a straddle of 2 means the working precision was
    insufficient to separate the next digit.
    """
    one = 1 << work
    two = 2 << work
    lo = (x.numerator << work) // x.denominator
    hi = -((-x.numerator << work) // x.denominator)
    bits = 0
    for _ in range(nbits):
        lo = (lo * lo) >> work
        hi = -((-(hi * hi)) >> work)
        bits <<= 1
        if hi < two:
            pass
        elif lo >= two:
            bits += 1
            lo >>= 1
            hi = (hi + 1) >> 1
        else:
            return None
        if lo < one:
            lo = one  # squaring of a value >= 1 stays >= 1
    return bits


def ceil_mul_log2(c: int, r: Fraction) -> int:
    """Smallest integer t with t >= c * log2(r), exactly; c must be positive.

    For r a power of two the product is an integer and is returned directly.
    Otherwise c * log2(r) is irrational, so a sufficiently tight bracket
    pins its floor and the ceiling is floor + 1.
    """
    if c <= 0:
        raise ValueError("coefficient must be positive")
    if r <= 0:
        raise ValueError("log2 requires a positive rational")
    exact = power_of_two_exponent(r)
    if exact is not None:
        return c * exact
    precision = max(8, c.bit_length() + 4)
    while True:
        lo, hi = log2_bracket(r, precision)
        flo = math.floor(c * lo)
        fhi = math.floor(c * hi)
        if flo == fhi:
            return flo + 1
        precision *= 2


def floor_fourth_root(x: int) -> int:
    """floor(x ** (1/4)) for a non-negative integer, exactly."""
    if x < 0:
        raise ValueError("fourth root of a negative integer")
    return math.isqrt(math.isqrt(x))


def largest_fourth_power_at_most(
    target: Fraction, grid_bits: int = 32
) -> tuple[Fraction, Fraction]:
    """Largest q on the dyadic grid 2**-grid_bits with q**4 <= target.

    Returns (q, q**4).  The grid is refined automatically when the target is
    so small that the initial grid would give q = 0.
    """
    if target <= 0:
        raise ValueError("target must be positive")
    bits = grid_bits
    while True:
        scaled = (target.numerator << (4 * bits)) // target.denominator
        root = floor_fourth_root(scaled)
        if root > 0:
            q = Fraction(root, 1 << bits)
            return (q, q**4)
        bits *= 2


def majority_error(correct_mass: Fraction, votes: int) -> Fraction:
    """P[at most floor(t/2) of t independent votes are correct], exactly.

    ``correct_mass`` is the per-vote probability of a correct outcome; the
    result is the exact binomial lower tail sum over j <= floor(t/2) of
    C(t,j) * a**j * (1-a)**(t-j).
    """
    if votes < 1 or votes % 2 == 0:
        raise ValueError(f"vote count must be a positive odd integer, got {votes}")
    a = Fraction(correct_mass)
    if not 0 <= a <= 1:
        raise ValueError(f"correct mass must lie in [0,1], got {a}")
    b = 1 - a
    total = Fraction(0)
    for j in range(votes // 2 + 1):
        total += math.comb(votes, j) * a**j * b ** (votes - j)
    return total


def min_odd_votes_for_error(
    correct_mass: Fraction, target: Fraction, cap: int = 20001
) -> int:
    """Smallest odd t whose exact majority error is <= target.

    Requires correct_mass > 1/2, otherwise no amount of voting converges.
    """
    a = Fraction(correct_mass)
    if a <= Fraction(1, 2):
        raise ValueError("majority voting needs per-vote correct mass > 1/2")
    t = 1
    while t <= cap:
        if majority_error(a, t) <= target:
            return t
        t += 2
    raise ValueError(f"no odd vote count up to {cap} reaches error {target}")
