import random
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from alterfold.exactnum import (AlgMatrix, AlgNum, ONE, SQRT2, THETA, ZERO, format_algnum, format_with_decimal,
                                is_psd, kernel_basis, parse, pow2_quarter, rank, sign)

getcontext().prec = 80
THETA_DEC = Decimal(2).sqrt().sqrt()


def to_decimal(a: AlgNum) -> Decimal:
    """Independent high-precision evaluation."""
    total = Decimal(0)
    for i, c in enumerate(a.coeffs):
        total += Decimal(c.numerator) / Decimal(c.denominator) * THETA_DEC ** i
    return total


fractions = st.fractions(min_value=-50, max_value=50, max_denominator=40)
algnums = st.builds(AlgNum, fractions, fractions, fractions, fractions)


def random_algnum(rng: random.Random) -> AlgNum:
    return AlgNum(*(Fraction(rng.randint(-50, 50), rng.randint(1, 40)) for _ in range(4)))


def check_field_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a and a - a == ZERO
    if not a.is_zero():
        assert a * a.inv() == ONE
        assert (b / a) * a == b


def check_sign(a, b):
    assert sign(a * b) == sign(a) * sign(b)
    for x in (a, b):
        ref = to_decimal(x)
        assert sign(x) == (ref > 0) - (ref < 0)


@settings(max_examples=300)
@given(algnums, algnums, algnums)
def test_field_axioms(a, b, c):
    check_field_axioms(a, b, c)


@settings(max_examples=300)
@given(algnums, algnums)
def test_sign_multiplicative_and_matches_decimal(a, b):
    check_sign(a, b)


def test_field_axioms_ten_thousand_random_triples():
    rng = random.Random(20240601)
    for _ in range(10_000):
        check_field_axioms(random_algnum(rng), random_algnum(rng), random_algnum(rng))


def test_sign_ten_thousand_random_pairs():
    rng = random.Random(7)
    for _ in range(10_000):
        check_sign(random_algnum(rng), random_algnum(rng))


def test_sign_of_near_cancellation():
    # 3 - 2*sqrt2 = 0.1715..., (3 - 2 sqrt2)^8 is tiny but positive
    x = (AlgNum(3) - 2 * SQRT2) ** 8
    assert sign(x) == 1
    assert sign(-x) == -1
    assert sign(ZERO) == 0
    assert sign(THETA - AlgNum(Fraction(118920711500272, 10 ** 14))) == 1


def test_basic_identities():
    assert THETA ** 4 == 2
    assert THETA.inv() == pow2_quarter(3) / 2
    assert (1 + SQRT2) * (1 - SQRT2) == -1
    assert pow2_quarter(6) == 2 * SQRT2
    assert pow2_quarter(-2) == SQRT2 / 2
    assert pow2_quarter(0) == ONE


@pytest.mark.parametrize("text,value", [
    ("sqrt2", SQRT2), ("2^(1/4)", THETA), ("2^(-3/4)", pow2_quarter(-3)), ("sqrt2/2", SQRT2 / 2),
    ("1/2^(3/4)", pow2_quarter(-3)), ("1/2 + 1/3·r + 2·r2 - 5/7·r3", AlgNum(Fraction(1, 2), Fraction(1, 3), 2, Fraction(-5, 7))),
    ("3 r2", 3 * SQRT2), ("(1 + r)(1 - r)", 1 - SQRT2), ("-r3", -pow2_quarter(3)),
])
def test_parse(text, value):
    assert parse(text) == value


@pytest.mark.parametrize("bad", ["", "1 +", "(1", "x", "1/0"])
def test_parse_errors(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse(bad)


@settings(max_examples=500)
@given(algnums)
def test_format_parse_roundtrip(a):
    assert parse(format_algnum(a)) == a


def test_format_with_decimal():
    assert format_with_decimal(SQRT2 / 2) == "1/2·r2 (0.707106781187)"
    assert format_algnum(ZERO) == "0"


def test_rank_kernel_psd():
    m = AlgMatrix.from_rows([[2, SQRT2], [SQRT2, 1]])
    assert rank(m) == 1
    (v,) = kernel_basis(m)
    assert m.apply(v) == [ZERO, ZERO]
    assert v == [-SQRT2 / 2, ONE]
    assert is_psd(m)
    assert not is_psd(AlgMatrix.from_rows([[1, 2], [2, 1]]))
    assert is_psd(AlgMatrix.identity(3))
    with pytest.raises(ValueError):
        is_psd(AlgMatrix.from_rows([[1, 2], [0, 1]]))


def test_matrix_product_and_transpose():
    a = AlgMatrix.from_rows([[1, THETA], [0, 2]])
    b = AlgMatrix.from_rows([[THETA, 0], [1, 1]])
    assert (a @ b).to_rows() == [[THETA + THETA, THETA], [2, 2]]
    assert a.transpose().transpose() == a


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
