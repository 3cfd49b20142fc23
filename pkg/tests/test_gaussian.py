from fractions import Fraction

import pytest

from polyred.gaussian import Gaussian, I, ONE, Q, ZERO


def test_construction_and_lowest_terms():
    x = Q("2/4", "-6/4")
    assert x.re == Fraction(1, 2) and x.im == Fraction(-3, 2)
    assert x.re.denominator > 0


def test_field_ops():
    a = Q(1, 2)
    b = Q("1/2", -1)
    assert a + b == Q("3/2", 1)
    assert a - b == Q("1/2", 3)
    assert a * b == Q("5/2", 0)          # (1+2i)(1/2 - i) = 1/2 - i + i - 2i^2
    assert a / a == ONE
    assert (a * b) / b == a
    assert -a == Q(-1, -2)
    assert I * I == Q(-1)


def test_pow():
    assert Q(0, 1) ** 4 == ONE
    assert Q(2) ** -2 == Q("1/4")
    assert Q(1, 1) ** 2 == Q(0, 2)


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_comparison_and_hash():
    assert Q(3) == 3
    assert Q(3, 0) == Fraction(3)
    assert Q(1, 1) != Q(1, -1)
    assert hash(Q("2/4")) == hash(Q("1/2"))
    assert bool(ZERO) is False and bool(I) is True


def test_str_forms():
    assert str(Q(1)) == "1"
    assert str(Q(0, 1)) == "i"
    assert str(Q(0, -1)) == "-i"
    assert str(Q("1/2", "-3/2")) == "1/2-3/2*i"
    assert str(Q(-1, 1)) == "-1+i"
