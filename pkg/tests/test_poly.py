"""Multivariate polynomials with exact scalar coefficients."""

from __future__ import annotations

from fractions import Fraction

import pytest

from curralg.poly import Poly, format_poly
from curralg.scalars import sqrt_scalar


def _v(name):
    return Poly.variable(name)


def test_ring_basics():
    x, y = _v("x"), _v("y")
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert (x + 1) ** 3 == x**3 + 3 * x**2 + 3 * x + 1


def test_zero_pruning():
    x = _v("x")
    assert (x - x).is_zero
    assert (x * 0).is_zero
    assert not (x + 1).is_zero


def test_scalar_coefficients_stay_exact():
    x = _v("x")
    p = x * sqrt_scalar(3) * sqrt_scalar(3)
    assert p == 3 * x
    q = x * Fraction(1, 3) * 3
    assert q == x


def test_substitute():
    x, y, z = _v("x"), _v("y"), _v("z")
    p = x * y + z
    assert p.substitute({"x": y}) == y * y + z
    assert p.substitute({"z": Poly()}) == x * y
    # substitution is simultaneous, not sequential
    q = (x + y).substitute({"x": y, "y": x})
    assert q == x + y


def test_evaluate():
    x, y = _v("x"), _v("y")
    p = x * x + 2 * y
    assert p.evaluate({"x": Fraction(1, 2), "y": 3}) == Fraction(25, 4)
    with pytest.raises(KeyError):
        p.evaluate({"x": 1})


def test_divmod_linear_exact_multiple():
    m3, n3 = _v("m_3"), _v("n_3")
    m1 = _v("m_1")
    lin = m3 + n3
    q_true = m1 + 2
    p = q_true * lin
    q, r = p.divmod_linear(lin, "n_3")
    assert q == q_true
    assert r.is_zero


def test_divmod_linear_remainder_free_of_pivot():
    m3, n3, m1 = _v("m_3"), _v("n_3"), _v("m_1")
    lin = m3 + n3
    p = n3 * n3 + m1
    q, r = p.divmod_linear(lin, "n_3")
    assert p == q * lin + r
    assert all("n_3" not in dict(mono) for mono in r.terms)


def test_divmod_linear_scaled_divisor():
    m3 = _v("m_3")
    lin = 2 * m3  # argument 2m, pivot component
    p = 6 * m3
    q, r = p.divmod_linear(lin, "m_3")
    assert q == Poly.const(3)
    assert r.is_zero


def test_format_poly_deterministic_order():
    m1, m2, n1, n2 = (_v(s) for s in ("m_1", "m_2", "n_1", "n_2"))
    p = m1 * n2 - m2 * n1
    assert format_poly(p) == "m_1*n_2 - m_2*n_1"
    assert format_poly(Poly()) == "0"
    assert format_poly(Poly.const(sqrt_scalar(3) / 3)) == "1/3*sqrt(3)"
