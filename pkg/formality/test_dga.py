"""
Test script for weighted dg-algebras
Covers validation, cohomology, connectivity, maps and Massey products
"""

import itertools
import logging
import sys
import os
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.config import FieldConfig
from formality.dga import (
    MasseyVanishing,
    arrangement_alpha,
    arrangement_formality_degree,
    arrangement_massey_free_degree,
    arrangement_massey_vanishing,
    check_dga_map,
    cohomology_algebra,
    connectivity,
    dga_purity_check,
    k_massey,
    low_degree_bound,
    monomial_algebra,
    tensor_dga,
    triple_massey,
    validate,
    vanishing_predicate,
)
from formality.errors import InputError
from formality.generators import (
    configuration_arnold,
    configuration_massey_vanishing,
    primitive_root_config,
    projective_space,
    random_pure_dga,
)

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

CFG = FieldConfig(characteristic=7, q=2)


def massey_algebra():
    """x, y, z in degree 1 with du = xy and dw = yz, products above degree 2 dropped."""
    generators = [("x", 1, 1), ("y", 1, 1), ("z", 1, 1), ("u", 1, 2), ("w", 1, 2)]
    differential = {"u": [(1, "x*y")], "w": [(1, "y*z")]}
    return monomial_algebra(CFG, generators, differential, degree_cap=2)


def test_projective_space_is_valid():
    a = projective_space(2, CFG).algebra
    assert [b.label for b in a.basis] == ["1", "x", "x*x"]
    assert validate(a).valid
    assert cohomology_algebra(a).betti() == {0: 1, 2: 1, 4: 1}


def test_validate_locates_a_broken_differential():
    a = projective_space(2, CFG).algebra
    diff = a.diff.copy()
    diff[a.index("x"), a.unit] = 1
    report = validate(replace(a, diff=diff))
    assert not report.valid
    assert report.violations[0].kind == "differential"
    assert report.error_message.startswith("differential")


def test_monomial_algebra_rejects_unknown_generators():
    with pytest.raises(InputError):
        monomial_algebra(CFG, [("x", 1, 1)], {"y": [(1, "x")]}, degree_cap=2)
    with pytest.raises(InputError):
        monomial_algebra(CFG, [("x", 1, 1)])


def test_massey_algebra_is_valid():
    a = massey_algebra()
    assert validate(a).valid
    betti = cohomology_algebra(a).betti()
    assert betti[0] == 1
    assert betti[1] == 3


def test_connectivity():
    report = connectivity(projective_space(2, CFG).algebra)
    assert report.connected
    assert report.r == 1
    assert report.simply_connected

    arnold = configuration_arnold(3, 1, primitive_root_config(5)).algebra
    report = connectivity(arnold)
    assert report.connected
    assert report.r == 0
    assert not report.simply_connected


def test_purity_of_projective_space():
    a = projective_space(2, CFG).algebra
    assert dga_purity_check(a, "1/2").is_pure
    assert not dga_purity_check(a, "1").is_pure


def test_tensor_of_projective_lines():
    line = projective_space(1, CFG).algebra
    product = tensor_dga(line, line)
    assert validate(product).valid
    assert cohomology_algebra(product).betti() == {0: 1, 2: 2, 4: 1}


def test_check_dga_map():
    a = projective_space(2, CFG).algebra
    field = a.field
    assert check_dga_map(field.identity(a.dim), a, a).ok

    scaled = field.identity(a.dim)
    scaled[a.index("x"), a.index("x")] = 2
    report = check_dga_map(scaled, a, a)
    assert report.chain
    assert not report.multiplicative
    assert "multiplicative" in report.error_message


def test_nontrivial_triple_massey_product():
    a = massey_algebra()
    result = k_massey(a, ["[x]", "[y]", "[z]"])
    assert result.defined
    assert result.degree == 2
    assert result.weight == 3
    assert result.contains_zero is False
    assert result.search_exhausted


def test_massey_product_not_defined():
    a = projective_space(2, CFG).algebra
    result = triple_massey(a, "[x]", "[x]", "[x]")
    assert not result.defined
    assert result.contains_zero is None
    assert "not defined" in result.error_message


def test_massey_needs_three_classes():
    with pytest.raises(InputError):
        k_massey(massey_algebra(), ["[x]", "[y]"])


def test_vanishing_predicates():
    assert vanishing_predicate("1/2", 3, 3) is MasseyVanishing.FORCED
    assert vanishing_predicate("1/2", 3, 8) is MasseyVanishing.NOT_FORCED
    assert vanishing_predicate(1, None, 5) is MasseyVanishing.FORCED
    with pytest.raises(InputError):
        vanishing_predicate("1/2", 3, 2)
    assert low_degree_bound(Fraction(2, 3), 4, 2) == 17


def test_arrangement_bounds():
    assert arrangement_alpha(2) == Fraction(2, 3)
    assert arrangement_massey_free_degree(2, 4) == 17
    assert arrangement_formality_degree(2, 4) == 4
    assert arrangement_massey_vanishing(1, 4, 3) is MasseyVanishing.FORCED


def positive_classes(coh):
    return [i for i, b in enumerate(coh.algebra.basis) if b.degree > 0]


def test_massey_products_vanish_on_random_pure_algebras():
    """alpha (k - 2) / m not an integer leaves no room for a non-zero value."""
    rng = np.random.default_rng(31)
    defined = 0
    instances = 0
    seed = 0
    while instances < 100:
        seed += 1
        modulus = int(rng.integers(2, 7))
        alpha = Fraction(int(rng.integers(1, 5)), 2)
        k = int(rng.integers(3, 5))
        if not alpha < modulus or vanishing_predicate(alpha, modulus, k) is not MasseyVanishing.FORCED:
            continue
        a = random_pure_dga(seed, alpha, modulus, CFG).algebra
        coh = cohomology_algebra(a)
        classes = positive_classes(coh)
        tuples = list(itertools.product(classes, repeat=k))
        for index in rng.permutation(len(tuples))[:20]:
            result = k_massey(a, list(tuples[index]), cohomology=coh)
            if result.defined:
                defined += 1
                assert result.contains_zero, (seed, alpha, modulus, tuples[index])
        instances += 1
    logger.info(f"{defined} defined Massey products checked on 100 pure algebras")
    assert defined > 0


def test_arnold_massey_products_vanish_by_exhaustion():
    cfg = FieldConfig(characteristic=5, q=2)
    for points, k in ((3, 3), (4, 3), (3, 4)):
        assert configuration_massey_vanishing(5, k)
        a = configuration_arnold(points, 1, cfg).algebra
        coh = cohomology_algebra(a)
        defined = 0
        for classes in itertools.product(coh.classes(1), repeat=k):
            result = k_massey(a, list(classes), cohomology=coh)
            if result.defined:
                defined += 1
                assert result.contains_zero, (points, classes)
                assert result.search_exhausted
        assert defined > 0


def test_fourfold_massey_product_on_a_pure_algebra():
    a = configuration_arnold(3, 1, FieldConfig(characteristic=5, q=2)).algebra
    coh = cohomology_algebra(a)
    w = coh.classes(1)[0]
    result = k_massey(a, [w, w, w, w], cohomology=coh)
    assert result.defined
    assert result.order == 4
    assert result.degree == 2
    assert result.contains_zero


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
