"""
Test script for the formality pipeline
Runs projective space and configuration spaces end to end
"""

import logging
import sys
import os
from fractions import Fraction

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.config import FieldConfig
from formality.generators import configuration_arnold, projective_space
from formality.pipeline import FormalityPipeline, PipelineStage, run_pipeline, tate_purity

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

CFG = FieldConfig(characteristic=7, q=2)
F5 = FieldConfig(characteristic=5, q=2)


def test_projective_plane():
    report = run_pipeline(projective_space(2, CFG).algebra, "1/2")
    assert report.success, report.error_message
    assert report.N == 4
    assert report.betti == {0: 1, 2: 1, 4: 1}
    assert report.massey[3] == "forced-vanish"
    assert report.witness.stages[0].name == "cohomology"
    assert set(report.stage_times) >= {"validate", "cohomology", "purity", "predicates"}


def test_projective_plane_with_forced_model():
    report = run_pipeline(projective_space(2, CFG).algebra, "1/2", force_model=True)
    assert report.success, report.error_message
    assert report.model is not None
    assert report.witness.overall_N == 4


def test_projective_plane_with_frobenius():
    generated = projective_space(2, CFG)
    report = run_pipeline(generated.algebra, "1/2", phi=generated.endo, cfg=CFG)
    assert report.success, report.error_message
    assert report.model.endo is not None


def test_tate_purity_from_frobenius():
    generated = projective_space(2, CFG)
    assert tate_purity(generated.algebra, generated.endo, CFG, "1/2").is_pure
    assert not tate_purity(generated.algebra, generated.endo, CFG, "1").is_pure


def test_impure_algebra_stops_at_purity():
    report = run_pipeline(projective_space(2, CFG).algebra, "1")
    assert not report.success
    assert report.failed_stage is PipelineStage.PURITY
    assert "off the weight diagonal" in report.error_message


def test_configuration_space_of_the_line_is_not_simply_connected():
    generated = configuration_arnold(3, 1, F5)
    report = run_pipeline(generated.algebra, generated.alpha)
    assert not report.success
    assert report.failed_stage is PipelineStage.MODEL
    assert report.betti == {0: 1, 1: 3, 2: 2}
    assert report.massey_free_degree is None


def test_configuration_space_of_the_plane():
    generated = configuration_arnold(3, 2, F5)
    assert generated.alpha == Fraction(2, 3)
    report = run_pipeline(generated.algebra, generated.alpha)
    assert report.success, report.error_message
    assert report.N == 4
    assert report.connectivity.r == 2
    assert report.massey_free_degree == 17


def test_pipeline_keeps_history():
    pipeline = FormalityPipeline()
    a = projective_space(1, CFG).algebra
    pipeline.run(a, "1/2")
    pipeline.run(a, "1/2", max_k=8)
    assert len(pipeline.history) == 2
    assert pipeline.history[1].massey[8] == "not-forced"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
