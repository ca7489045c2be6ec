"""
Test script for the built-in input generators
"""

import logging
import sys
import os
from fractions import Fraction

import pytest
from pydantic import ValidationError

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.config import FieldConfig
from formality.dga import cohomology_algebra, dga_purity_check, validate
from formality.errors import InputError
from formality.generators import (
    GeneratorSpec,
    arnold_basis,
    arnold_poincare,
    configuration_arnold,
    configuration_formality_degree,
    configuration_fully_formal,
    configuration_massey_vanishing,
    generate,
    gm,
    primitive_root_config,
    projective_space,
    random_pure_dga,
)
from formality.weights import order_of_q

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

CFG = FieldConfig(characteristic=7, q=2)


def test_orders_and_primitive_roots():
    assert order_of_q(FieldConfig(characteristic=7, q=2)) == 3
    assert order_of_q(FieldConfig(characteristic=5, q=2)) == 4
    assert primitive_root_config(5).q == 2
    assert primitive_root_config(7).q == 3
    assert primitive_root_config(11).q == 2
    assert primitive_root_config(11).h == 10


def test_configuration_formality_degrees():
    assert configuration_formality_degree(1, 5) == 3
    assert configuration_formality_degree(2, 5) == 4
    assert configuration_formality_degree(2, 7) == 7
    assert configuration_formality_degree(3, 11) == 15
    assert configuration_fully_formal(3, 1, 5)
    assert not configuration_fully_formal(5, 2, 5)
    assert configuration_massey_vanishing(5, 3)
    assert not configuration_massey_vanishing(7, 8)


def test_arnold_algebra():
    assert arnold_poincare(3) == [1, 3, 2]
    assert arnold_poincare(4) == [1, 6, 11, 6]
    assert len(arnold_basis(4)) == 24
    for points, d in ((3, 1), (4, 1), (3, 2)):
        a = configuration_arnold(points, d, primitive_root_config(7)).algebra
        assert validate(a).valid
        betti = cohomology_algebra(a).betti()
        expected = {(2 * d - 1) * k: c for k, c in enumerate(arnold_poincare(points))}
        assert betti == expected


def test_configuration_spaces_are_pure():
    generated = configuration_arnold(4, 2, FieldConfig(characteristic=5, q=2))
    assert generated.alpha == Fraction(2, 3)
    assert dga_purity_check(generated.algebra, generated.alpha).is_pure


def test_projective_space_over_q():
    generated = projective_space(3, FieldConfig(characteristic=0, q=2))
    assert generated.alpha == 1
    assert generated.modulus is None
    assert [b.weight for b in generated.algebra.basis] == [0, 2, 4, 6]
    with pytest.raises(InputError):
        projective_space(0, CFG)


def test_gm():
    generated = gm(CFG)
    assert cohomology_algebra(generated.algebra).betti() == {0: 1, 1: 1}


def test_random_pure_dga_is_pure():
    for seed in range(3):
        generated = random_pure_dga(seed, "1/2", 3, CFG)
        assert validate(generated.algebra).valid
        assert dga_purity_check(generated.algebra, "1/2").is_pure


def test_generator_spec_dispatch():
    generated = generate(GeneratorSpec(kind="projective", n=2, field=CFG))
    assert generated.description == "P^2"
    with pytest.raises(ValidationError):
        GeneratorSpec(kind="klein_bottle")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
