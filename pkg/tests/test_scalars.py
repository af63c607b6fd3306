"""Exact scalar arithmetic: rationals extended by square roots."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from curralg.scalars import SurdSum, format_scalar, parse_scalar, sqrt_scalar


def test_perfect_squares_stay_rational():
    assert sqrt_scalar(4) == 2
    assert sqrt_scalar(0) == 0
    assert sqrt_scalar(Fraction(9, 4)) == Fraction(3, 2)
    assert not isinstance(sqrt_scalar(16), SurdSum)


def test_sqrt_squares_back():
    for n in (2, 3, 5, 6, 7, 8, 12, 45):
        s = sqrt_scalar(n)
        assert s * s == n


def test_radicand_normalization():
    # sqrt(8) = 2*sqrt(2), sqrt(12) = 2*sqrt(3)
    assert sqrt_scalar(8) == 2 * sqrt_scalar(2)
    assert sqrt_scalar(12) == 2 * sqrt_scalar(3)
    assert sqrt_scalar(Fraction(1, 3)) == sqrt_scalar(3) / 3


def test_mixed_products():
    r2, r3, r6 = sqrt_scalar(2), sqrt_scalar(3), sqrt_scalar(6)
    assert r2 * r3 == r6
    assert r6 * r2 == 2 * r3
    x = Fraction(1, 2) + r3
    y = x * x
    assert y == Fraction(13, 4) + r3


def test_addition_cancels_to_rational():
    r5 = sqrt_scalar(5)
    assert (1 + r5) + (1 - r5) == 2
    assert isinstance((1 + r5) - r5, (int, Fraction))


def test_division_and_inverse():
    r3 = sqrt_scalar(3)
    assert (1 / r3) * r3 == 1
    x = Fraction(2, 3) + 5 * sqrt_scalar(2) - sqrt_scalar(3)
    assert x * (1 / x) == 1
    # nested mix of three radicals
    y = 1 + sqrt_scalar(2) + sqrt_scalar(3) + sqrt_scalar(5)
    assert y / y == 1


def test_zero_division_raises():
    with pytest.raises(ZeroDivisionError):
        _ = 1 / (sqrt_scalar(2) - sqrt_scalar(2) + 0)


def test_float_conversion():
    x = Fraction(1, 2) + sqrt_scalar(3)
    assert math.isclose(float(x), 0.5 + math.sqrt(3), rel_tol=1e-15)


def test_comparison_with_floats_is_refused():
    r2 = sqrt_scalar(2)
    with pytest.raises(TypeError):
        _ = r2 + 0.5


def test_parse_format_roundtrip():
    samples = [
        "1/2",
        "sqrt(3)",
        "-1/3*sqrt(3)",
        "1/2 + 1/2*sqrt(5)",
        "2 - sqrt(2)",
    ]
    for text in samples:
        value = parse_scalar(text)
        again = parse_scalar(format_scalar(value))
        assert again == value


def test_format_is_deterministic():
    a = sqrt_scalar(3) + Fraction(1, 2)
    b = Fraction(1, 2) + sqrt_scalar(3)
    assert format_scalar(a) == format_scalar(b)


def test_hash_consistency():
    assert hash(sqrt_scalar(4)) == hash(2)
    d = {sqrt_scalar(2) + 1: "x"}
    assert d[1 + sqrt_scalar(2)] == "x"
