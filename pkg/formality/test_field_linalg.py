"""
Test script for exact linear algebra
Checks ranks, kernels, inverses and characteristic polynomials over F_l and Q
"""

import logging
import sys
import os
from fractions import Fraction

import numpy as np
import pytest
from sympy import nextprime

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.field_linalg import (
    MAX_CHARACTERISTIC,
    Field,
    FieldError,
    char_poly,
    equal,
    generalized_eigenspace,
    inverse,
    is_zero,
    kernel_basis,
    matrix_power,
    multiplicative_order,
    poly_mul,
    random_invertible,
    rank,
    solve,
    solve_matrix,
)

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

F7 = Field(7)
Q = Field(0)


def test_scalars():
    """Residues and rationals are canonical."""
    assert F7.element(-1) == 6
    assert F7.element(Fraction(1, 2)) == 4
    assert F7.element("3/2") == 5
    assert Q.element("1/2") == Fraction(1, 2)
    assert F7.inv(3) == 5
    assert Q.inv(Fraction(2, 3)) == Fraction(3, 2)
    assert F7.power(2, 3) == 1
    assert Q.format(Fraction(4, 2)) == 2
    assert Q.format(Fraction(1, 3)) == "1/3"


def test_field_rejects_bad_characteristic():
    for characteristic in (-1, 4, 9):
        with pytest.raises(FieldError):
            Field(characteristic)
    with pytest.raises(FieldError):
        Field(int(nextprime(MAX_CHARACTERISTIC)))
    with pytest.raises(FieldError):
        F7.element(Fraction(1, 7))


def test_rank_depends_on_characteristic():
    entries = [[1, 1], [1, -1]]
    assert rank(Q, Q.matrix(entries)) == 2
    assert rank(Field(2), Field(2).matrix(entries)) == 1
    assert rank(F7, F7.zeros(0, 3)) == 0


def test_kernel_and_solve():
    a = F7.matrix([[1, 2, 3], [2, 4, 6]])
    kernel = kernel_basis(F7, a)
    assert kernel.shape == (3, 2)
    assert is_zero(F7.mul(a, kernel))

    b = F7.vector([1, 2])
    x, k = solve(F7, a, b)
    assert equal(F7.mul(a, x), b)
    assert k.shape[1] == 2

    assert solve_matrix(F7, F7.matrix([[1, 0], [0, 0]]), F7.matrix([[0], [1]])) is None


def test_inverse_over_both_fields():
    rng = np.random.default_rng(3)
    for field in (F7, Q):
        a = random_invertible(field, 4, rng)
        assert equal(field.mul(a, inverse(field, a)), field.identity(4))
    assert equal(inverse(Q, Q.matrix([[2, 0], [0, 3]])), Q.matrix([["1/2", 0], [0, "1/3"]]))
    with pytest.raises(FieldError):
        inverse(F7, F7.matrix([[1, 2], [2, 4]]))


def test_empty_systems():
    """Zero-row systems solve trivially."""
    for field in (F7, Q):
        assert inverse(field, field.zeros(0, 0)).shape == (0, 0)
        assert solve_matrix(field, field.zeros(0, 3), field.zeros(0, 2)).shape == (3, 2)
        x, k = solve(field, field.zeros(0, 2), field.zeros(0, 1))
        assert x.shape == (2,)
        assert k.shape == (2, 2)


def test_char_poly():
    swap = [[0, 1], [1, 0]]
    assert char_poly(Q, Q.matrix(swap)) == [-1, 0, 1]
    assert char_poly(F7, F7.matrix(swap)) == [6, 0, 1]
    # (t - 2)(t - 4) = t^2 - 6t + 8
    assert char_poly(F7, F7.matrix([[2, 0], [0, 4]])) == [1, 1, 1]
    assert char_poly(F7, F7.zeros(0, 0)) == [1]


def test_char_poly_is_conjugation_invariant():
    rng = np.random.default_rng(11)
    a = F7.matrix([[2, 1, 0], [0, 2, 0], [0, 0, 4]])
    t = random_invertible(F7, 3, rng)
    conjugated = F7.chain(t, a, inverse(F7, t))
    expected = poly_mul(F7, poly_mul(F7, [5, 1], [5, 1]), [3, 1])
    assert char_poly(F7, conjugated) == expected


def test_generalized_eigenspace():
    jordan = F7.matrix([[2, 1], [0, 2]])
    assert generalized_eigenspace(F7, jordan, 2).shape[1] == 2
    assert generalized_eigenspace(F7, jordan, 3).shape[1] == 0
    nilpotent = F7.sub(jordan, F7.scalar_matrix(2, 2))
    assert is_zero(matrix_power(F7, nilpotent, 2))


def test_multiplicative_order():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(2, 5) == 4
    assert multiplicative_order(3, 7) == 6


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
