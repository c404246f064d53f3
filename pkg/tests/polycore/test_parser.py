from fractions import Fraction

import pytest

from symred.polycore import (
    Polynomial,
    PolynomialSyntaxError,
    UnknownVariableError,
    poly_format,
    poly_parse,
)


def test_parse_rational_coefficients() -> None:
    poly = poly_parse("x1^2 + 1/2*y1", ["x1", "y1"])
    assert dict(poly.terms) == {(2, 0): Fraction(1), (0, 1): Fraction(1, 2)}


def test_parse_zero_and_cancellation() -> None:
    assert poly_parse("0", ["x1"]).is_zero
    assert poly_parse("x1*x1 - x1^2", ["x1"]).is_zero


def test_parse_parentheses_and_powers() -> None:
    poly = poly_parse("(x + y)^2 - 2*x*y", ["x", "y"])
    assert poly == poly_parse("x^2 + y^2", ["x", "y"])


def test_parse_leading_sign() -> None:
    poly = poly_parse("-x + 3", ["x"])
    assert poly.coefficient((1,)) == -1
    assert poly.constant_term() == 3


def test_syntax_error_reports_position() -> None:
    with pytest.raises(PolynomialSyntaxError) as excinfo:
        poly_parse("x1 + * y1", ["x1", "y1"])
    assert excinfo.value.position == 5


def test_unknown_variable() -> None:
    with pytest.raises(UnknownVariableError) as excinfo:
        poly_parse("x1 + z", ["x1", "y1"])
    assert excinfo.value.name == "z"
    assert excinfo.value.position == 5


@pytest.mark.parametrize("text", ["", "x1 +", "(x1", "x1 x2", "2/0", "x1^y1", "x1 $ 2"])
def test_malformed_inputs(text: str) -> None:
    with pytest.raises(PolynomialSyntaxError):
        poly_parse(text, ["x1", "x2", "y1"])


def test_format_is_canonical() -> None:
    names = ["x1", "y1"]
    poly = poly_parse("x1 - 4 - 3/2*y1*x1^2", names)
    text = poly_format(poly, names)
    assert text == "-3/2*x1^2*y1 + x1 - 4"
    assert poly_parse(text, names) == poly
    assert poly_format(poly_parse(text, names), names) == text


def test_format_orders_variables_within_degree() -> None:
    names = ["a", "b", "c"]
    assert poly_format(poly_parse("c + b + a", names), names) == "a + b + c"
    assert poly_format(Polynomial.zero(3), names) == "0"
