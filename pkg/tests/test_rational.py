from fractions import Fraction

import pytest

from lpbounds.errors import ParseError
from lpbounds.rational import (
    ceil_mul_log2,
    floor_fourth_root,
    format_rational,
    largest_fourth_power_at_most,
    log2_bracket,
    majority_error,
    min_odd_votes_for_error,
    parse_rational,
    power_of_two_exponent,
)


def test_parse_rational_forms():
    assert parse_rational("3") == 3
    assert parse_rational("-2") == -2
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(" 7/8 ") == Fraction(7, 8)


def test_parse_rational_rejects_decimals_naming_the_form():
    with pytest.raises(ParseError) as exc:
        parse_rational("0.125")
    assert "num/den" in str(exc.value)


def test_format_round_trip():
    for q in [Fraction(0), Fraction(5), Fraction(-3, 7), Fraction(22, 4)]:
        assert parse_rational(format_rational(q)) == q


def test_power_of_two_exponent():
    assert power_of_two_exponent(Fraction(8)) == 3
    assert power_of_two_exponent(Fraction(1, 16)) == -4
    assert power_of_two_exponent(Fraction(1)) == 0
    assert power_of_two_exponent(Fraction(3)) is None
    assert power_of_two_exponent(Fraction(3, 4)) is None


def test_log2_bracket_exact_on_powers():
    lo, hi = log2_bracket(Fraction(1, 8))
    assert lo == hi == -3


def test_log2_bracket_contains_log2_exactly():
    # verify 2^lo <= r <= 2^hi by integer cross-multiplication at low precision
    for r in [Fraction(3), Fraction(5, 7), Fraction(41, 8), Fraction(1, 3)]:
        lo, hi = log2_bracket(r, precision_bits=6)
        assert hi - lo <= Fraction(1, 64)
        # 2^(a/64) <= r  <=>  2^a <= r^64
        a = lo * 64
        b = hi * 64
        assert a.denominator == 1 and b.denominator == 1
        r64 = r**64
        assert Fraction(2) ** int(a) <= r64 <= Fraction(2) ** int(b)
        lo20, hi20 = log2_bracket(r)
        assert hi20 - lo20 <= Fraction(1, 1 << 20)


def test_ceil_mul_log2():
    assert ceil_mul_log2(100, Fraction(4)) == 200
    assert ceil_mul_log2(7, Fraction(1, 2)) == -7
    k = ceil_mul_log2(100, Fraction(3))
    assert 2**k >= 3**100 > 2 ** (k - 1)
    # huge coefficients stay exact on powers of two
    assert ceil_mul_log2(100 * (1 << 300), Fraction(1 << 20)) == 2000 * (1 << 300)


def test_floor_fourth_root():
    for x in [0, 1, 15, 16, 17, 80, 81, 82, 10**12]:
        r = floor_fourth_root(x)
        assert r**4 <= x < (r + 1) ** 4


def test_largest_fourth_power_at_most():
    for target in [Fraction(1, 4), Fraction(1, 9), Fraction(1, 3000 * 401**4)]:
        q, d = largest_fourth_power_at_most(target)
        assert q > 0 and d == q**4 and d <= target
        assert (2 * q) ** 4 >= target  # never more than a factor 2 below the root


def test_majority_error_small_cases():
    a = Fraction(3, 4)
    assert majority_error(a, 1) == Fraction(1, 4)
    # t=3: C(3,0) b^3 + C(3,1) a b^2
    expected = Fraction(1, 4) ** 3 + 3 * Fraction(3, 4) * Fraction(1, 4) ** 2
    assert majority_error(a, 3) == expected
    with pytest.raises(ValueError):
        majority_error(a, 2)


def test_majority_error_monotone_in_votes():
    a = Fraction(7, 8)
    errs = [majority_error(a, t) for t in (1, 3, 5, 7, 9)]
    assert all(x > y for x, y in zip(errs, errs[1:]))


def test_min_odd_votes():
    a = Fraction(7, 8)
    target = Fraction(1, 1000)
    t = min_odd_votes_for_error(a, target)
    assert t % 2 == 1
    assert majority_error(a, t) <= target
    if t > 1:
        assert majority_error(a, t - 2) > target
    with pytest.raises(ValueError):
        min_odd_votes_for_error(Fraction(1, 2), target)
