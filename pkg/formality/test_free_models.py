"""
Test script for free models and the dg-algebra formality witness
"""

import logging
import sys
import os
from fractions import Fraction

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.certificates import certificate_json, verify_certificate
from formality.config import FieldConfig
from formality.dga import monomial_algebra
from formality.errors import InputError, NotConnectedError, PurityError
from formality.field_linalg import is_zero
from formality.free_models import (
    Strip,
    build_free_model,
    formality_witness,
    strip_of,
    weight_within_bounds,
    weighted_model_from_tate,
    zero_differential_witness,
)
from formality.generators import configuration_arnold, primitive_root_config, projective_space, random_pure_dga

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

CFG = FieldConfig(characteristic=7, q=2)


def test_free_model_of_projective_plane():
    a = projective_space(2, CFG).algebra
    model = build_free_model(a, "1/2")
    assert model.success, model.error_message
    assert model.bound == 4
    assert [(g.degree, g.weight) for g in model.generators] == [(2, 1)]
    assert model.report.quasi_iso.is_quasi_iso


def test_free_model_needs_simple_connectivity():
    arnold = configuration_arnold(3, 1, primitive_root_config(5)).algebra
    with pytest.raises(NotConnectedError):
        build_free_model(arnold, 1)


def test_free_model_needs_purity():
    a = projective_space(2, CFG).algebra
    with pytest.raises(PurityError):
        build_free_model(a, "1")


def test_weighted_model_from_tate_data():
    generated = projective_space(2, CFG)
    model = weighted_model_from_tate(generated.algebra, generated.endo, CFG)
    assert model.success, model.error_message
    assert model.checks["ho_morphism_closed"]
    assert model.checks["weights_match_eigenvalues"]
    assert model.q == 2


def test_dga_formality_witness():
    a = projective_space(2, CFG).algebra
    witness = formality_witness(build_free_model(a, "1/2"), "1/2")
    assert witness.success, witness.error_message
    assert witness.overall_N == 4
    assert [s.name for s in witness.stages] == ["model", "quotient", "projection", "truncation", "cohomology"]
    assert witness.checks["ideal_acyclic"]


def test_strips_and_weight_bounds():
    half = Fraction(1, 2)
    assert strip_of(2, 1, half, 3) is Strip.DIAGONAL
    assert strip_of(2, 2, half, 3) is Strip.ABSORBING
    assert strip_of(6, 0, half, 3) is Strip.IDEAL
    assert weight_within_bounds(2, 1, half, 3)
    assert weight_within_bounds(4, 2, half, None)
    assert not weight_within_bounds(2, 0, half, None)


def test_zero_differential_witness():
    a = projective_space(2, CFG).algebra
    witness = zero_differential_witness(a, "1/2")
    assert witness.success
    assert witness.checks["pure"]
    assert [s.name for s in witness.stages] == ["cohomology"]

    acyclic = monomial_algebra(CFG, [("x", 2, 1), ("y", 3, 1)], {"x": [(1, "y")]}, degree_cap=3)
    with pytest.raises(InputError):
        zero_differential_witness(acyclic, "1/2")


def test_free_models_of_random_pure_algebras():
    """Algebras with a non-zero differential go through the model and the full witness."""
    for seed in range(10):
        a = random_pure_dga(seed, "1/2", 3, CFG).algebra
        assert not is_zero(a.diff)
        model = build_free_model(a, "1/2")
        assert model.success, (seed, model.error_message)
        assert model.bound == 4
        witness = formality_witness(model, "1/2")
        assert witness.success, (seed, witness.error_message)
        assert witness.overall_N == 4
        if seed < 3:
            report = verify_certificate(certificate_json(witness, CFG))
            assert report.success, (seed, report.error_message)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
