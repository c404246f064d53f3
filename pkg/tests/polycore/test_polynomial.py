from fractions import Fraction

import numpy as np
import pytest

from symred.errors import ArityMismatchError
from symred.polycore import (
    Polynomial,
    compile_jacobian,
    compile_polynomials,
    poly_diff,
    poly_eval,
    poly_eval_exact,
    poly_parse,
)

R6 = ["x1", "x2", "x3", "y1", "y2", "y3"]


def test_diff_examples() -> None:
    p = poly_parse("x1^2*y1", ["x1", "y1"])
    assert poly_diff(p, 0) == poly_parse("2*x1*y1", ["x1", "y1"])
    assert poly_diff(Polynomial.constant(2, 7), 1).is_zero
    norm = poly_parse("x1^2 + x2^2 + x3^2", ["x1", "x2", "x3"])
    assert poly_diff(norm, 1) == poly_parse("2*x2", ["x1", "x2", "x3"])


def test_diff_index_out_of_range() -> None:
    with pytest.raises(IndexError):
        poly_diff(Polynomial.variable(2, 0), 2)


def test_eval_examples() -> None:
    p = poly_parse("1/2*x1^2 + 1/2*y1^2", ["x1", "y1"])
    assert poly_eval(p, [1, 1]) == pytest.approx(1.0)
    assert poly_eval(Polynomial.zero(3), [1.5, -2.0, 0.25]) == 0.0


def test_eval_arity_mismatch() -> None:
    with pytest.raises(ArityMismatchError):
        poly_eval(Polynomial.variable(2, 0), [1.0])


def test_lagrange_identity_is_exact_zero() -> None:
    text = (
        "(x1^2 + x2^2 + x3^2)*(y1^2 + y2^2 + y3^2) - (x1*y1 + x2*y2 + x3*y3)^2"
        " - (x2*y3 - x3*y2)^2 - (x3*y1 - x1*y3)^2 - (x1*y2 - x2*y1)^2"
    )
    identity = poly_parse(text, R6)
    assert identity.is_zero
    point = [Fraction(1, 3), Fraction(-2), Fraction(5, 7), 3, Fraction(1, 2), -4]
    assert poly_eval_exact(identity, point) == 0


def test_compose_and_substitute() -> None:
    p = poly_parse("a*b - c^2", ["a", "b", "c"])
    images = [poly_parse(t, ["s", "t"]) for t in ("s^2", "t^2", "s*t")]
    assert p.compose(images).is_zero
    q = poly_parse("x^2 + y", ["x", "y"])
    assert q.substitute(1, poly_parse("1 - x^2", ["x", "y"])) == Polynomial.constant(2, 1)


def test_restrict_to_axis() -> None:
    p = poly_parse("x^2*y - 3*y + 2", ["x", "y"])
    assert p.restrict_to_axis([2.0, 0.0], 1).tolist() == pytest.approx([2.0, 1.0])
    assert p.restrict_to_axis([0.0, 5.0], 0).tolist() == pytest.approx([-13.0, 0.0, 5.0])
    assert Polynomial.constant(2, 3).restrict_to_axis([1.0, 1.0], 0).tolist() == [3.0]


def test_arithmetic_is_exact() -> None:
    third = Polynomial.constant(1, Fraction(1, 3))
    total = third + third + third
    assert total == 1
    assert (Polynomial.variable(1, 0) ** 3).degree == 3
    assert Polynomial.monomial((1, 2), 0).is_zero


def test_compiled_evaluation_matches_scalar_path() -> None:
    names = ["x", "y", "z"]
    polys = [poly_parse(t, names) for t in ("x^2*y - z", "1/3*x*y*z + 2", "0")]
    compiled = compile_polynomials(polys)
    rng = np.random.default_rng(7)
    points = rng.standard_normal((20, 3))
    values = compiled(points)
    assert values.shape == (20, 3)
    for row, point in zip(values, points, strict=True):
        assert row == pytest.approx([p.evaluate(point) for p in polys])


def test_compiled_jacobian_shape_and_values() -> None:
    names = ["x", "y"]
    polys = [poly_parse("x^2 + y", names), poly_parse("x*y", names)]
    jac = compile_jacobian(polys, 2)
    assert jac([1.0, 2.0]) == pytest.approx(np.array([[2.0, 1.0], [2.0, 1.0]]))
    assert jac(np.zeros((5, 2))).shape == (5, 2, 2)
