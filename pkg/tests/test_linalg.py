import numpy as np
import pytest

from symred.linalg import (
    column_span,
    complement_within,
    kernel,
    numerical_rank,
    singular_values,
    subspace_intersection,
)


def test_numerical_rank_is_relative() -> None:
    matrix = np.diag([1.0, 1e-6, 1e-12])
    assert numerical_rank(matrix) == 2
    assert numerical_rank(matrix * 1e-8) == 2
    assert numerical_rank(np.zeros((2, 3))) == 0
    assert numerical_rank(np.zeros((0, 3))) == 0


def test_numerical_rank_floor() -> None:
    tiny = np.diag([1e-12, 1e-13])
    assert numerical_rank(tiny) == 2
    assert numerical_rank(tiny, floor=1.0) == 0


def test_singular_values_sorted() -> None:
    values = singular_values(np.diag([2.0, 5.0, 1.0]))
    assert values == pytest.approx([5.0, 2.0, 1.0])


def test_kernel_and_span() -> None:
    matrix = np.array([[1.0, 1.0, 0.0]])
    basis = kernel(matrix)
    assert basis.shape == (3, 2)
    assert np.abs(matrix @ basis).max() <= 1e-12
    assert kernel(np.zeros((1, 3))).shape == (3, 3)
    assert column_span(np.zeros((3, 2))).shape == (3, 0)
    assert column_span(np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]])).shape == (3, 1)


def test_subspace_intersection() -> None:
    a = np.eye(3)[:, :2]
    b = np.eye(3)[:, 1:]
    both = subspace_intersection(a, b)
    assert both.shape == (3, 1)
    assert abs(both[1, 0]) == pytest.approx(1.0)
    assert subspace_intersection(a, np.eye(3)[:, 2:]).shape == (3, 0)


def test_complement_within() -> None:
    space = np.eye(3)[:, :2]
    removed = np.array([[1.0], [0.0], [0.0]])
    rest = complement_within(space, removed)
    assert rest.shape == (3, 1)
    assert abs(rest[1, 0]) == pytest.approx(1.0)
    assert complement_within(space, np.zeros((3, 0))) is space
