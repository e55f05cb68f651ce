import cmath
from fractions import Fraction

import pytest
import sympy

from kpotent.scalars import (
    FloatComplexField,
    ScalarParseError,
    cyclotomic_field,
    cyclotomic_polynomial,
    embed,
    euler_phi,
)


@pytest.mark.parametrize("k", range(1, 25))
def test_cyclotomic_polynomial_matches_sympy(k):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(k, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(k)) == [int(c) for c in expected]
    assert euler_phi(k) == len(expected) - 1


def test_known_small_cases():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)


def test_omega_powers():
    f2 = cyclotomic_field(2)
    assert f2.omega_power(1) == f2(-1)
    f3 = cyclotomic_field(3)
    assert f3.omega_power(3) == f3.one
    assert f3.omega_power(2).coeffs == (-1, -1)
    assert f3.omega_power(-1) == f3.omega_power(2)


def test_inverses():
    f4 = cyclotomic_field(4)
    assert f4.omega.inverse() == f4.omega_power(3)
    f3 = cyclotomic_field(3)
    assert (f3.one + f3.omega).inverse() == -f3.omega
    with pytest.raises(ZeroDivisionError):
        f3.zero.inverse()


@pytest.mark.parametrize("k", [3, 5, 7, 8, 12])
def test_complex_embedding_is_a_homomorphism(k):
    """Oracle: evaluate the power-basis coordinates at exp(2 pi i / k)."""
    f = cyclotomic_field(k)
    a = f.from_coeffs([Fraction(i + 1, 2) for i in range(f.phi)])
    b = f.from_coeffs([(-1) ** i * (i + 2) for i in range(f.phi)])
    for x, y in [(a + b, complex(a) + complex(b)), (a * b, complex(a) * complex(b)),
                 (a / b, complex(a) / complex(b)), (a.conjugate(), complex(a).conjugate())]:
        assert cmath.isclose(complex(x), y, rel_tol=1e-9, abs_tol=1e-9)


def test_root_of_smaller_order():
    f = cyclotomic_field(12)
    assert f.root(3, 1) == f.omega_power(4)
    assert f.root(4, 1) ** 4 == f.one
    with pytest.raises(ValueError):
        f.root(5, 1)


def test_embed():
    f3, f12 = cyclotomic_field(3), cyclotomic_field(12)
    assert embed(f3.omega, f12) == f12.omega_power(4)
    assert embed(f3(Fraction(2, 3)) + f3.omega, f12) == f12(Fraction(2, 3)) + f12.omega_power(4)


@pytest.mark.parametrize("text,expected", [
    ("3", (3, 0)),
    ("1/2 - w", (Fraction(1, 2), -1)),
    ("w^2", (-1, -1)),
    ("2*w^2 + 0.5", (Fraction(-3, 2), -2)),
    ("  w  +  w ", (0, 2)),
])
def test_parse(text, expected):
    f = cyclotomic_field(3)
    assert f.parse(text).coeffs == tuple(Fraction(c) for c in expected)


def test_format_roundtrip():
    f = cyclotomic_field(12)
    for c in ([0, 0, 0, 0], [1, -2, 0, Fraction(3, 7)], [0, 1, 0, 0], [-1, 0, 0, 0]):
        a = f.from_coeffs(c)
        assert f.parse(f.format(a)) == a
    assert f.format(f.zero) == "0"


def test_parse_errors():
    f = cyclotomic_field(3)
    for bad in ["", "w^", "3x", "1//2", "w*w*"]:
        with pytest.raises(ScalarParseError):
            f.parse(bad)


def test_mixed_fields_rejected():
    with pytest.raises(TypeError):
        cyclotomic_field(3).omega + cyclotomic_field(4).omega


def test_float_backend():
    g = FloatComplexField(4, eps=1e-9)
    assert g.eq(g.omega ** 4, 1)
    assert g.eq(g.parse("1 + 2*w"), 1 + 2j)
    assert g.is_zero(1e-12)
    assert not g.exact
