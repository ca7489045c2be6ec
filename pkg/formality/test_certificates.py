"""
Test script for certificates
Serializes witnesses, verifies them from scratch and checks that tampering is caught
"""

import json
import logging
import sys
import os
from fractions import Fraction

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.certificates import certificate_json, verify_certificate
from formality.complexes import Complex, EndoComplex
from formality.config import FieldConfig
from formality.errors import InputError, SchemaError
from formality.free_models import build_free_model, formality_witness, zero_differential_witness
from formality.generators import gm, projective_space, random_pure
from formality.serialization import dump_document, encode_dga, parse_document
from formality.weights import formality_zigzag_complex, graded_formality_witness

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

CFG = FieldConfig(characteristic=7, q=2)
F7 = CFG.field


def projective_certificate() -> str:
    a = projective_space(2, CFG).algebra
    return certificate_json(zero_differential_witness(a, "1/2"), CFG)


def test_certificate_is_byte_stable():
    text = projective_certificate()
    assert text == projective_certificate()
    assert json.loads(text)["schema"] == 1


def test_identity_witness_certificate_verifies():
    report = verify_certificate(projective_certificate())
    assert report.success, report.error_message
    assert report.overall_N == 4
    assert report.stages == {"cohomology": True}


def test_model_witness_certificate_verifies():
    a = projective_space(2, CFG).algebra
    witness = formality_witness(build_free_model(a, "1/2"), "1/2")
    report = verify_certificate(certificate_json(witness, CFG))
    assert report.success, report.error_message
    assert all(report.stages.values())


def test_complex_zigzag_certificate_verifies():
    x = EndoComplex(
        Complex(field=F7, dims={0: 1, 2: 1, 3: 1, 4: 1}, diff={4: F7.matrix([[1]])}),
        {0: F7.matrix([[1]]), 2: F7.matrix([[2]]), 3: F7.matrix([[4]]), 4: F7.matrix([[4]])},
    )
    witness = formality_zigzag_complex(x, "1/2", CFG)
    report = verify_certificate(certificate_json(witness, CFG))
    assert report.success, report.error_message
    assert report.composite_identity


def test_tampered_degree_bound_is_caught():
    doc = json.loads(projective_certificate())
    doc["overall_N"] = 5
    report = verify_certificate(json.dumps(doc))
    assert not report.success
    assert report.failed_stage == "overall_N"
    assert "overall_N" in report.error_message


def test_tampered_stage_map_is_caught():
    doc = json.loads(projective_certificate())
    entries = doc["stages"][0]["maps"]["entries"]
    entries[0][0] = 2
    report = verify_certificate(json.dumps(doc))
    assert not report.success
    assert "cohomology" in report.failures


def test_unknown_schema_version():
    doc = json.loads(projective_certificate())
    doc["schema"] = 2
    with pytest.raises(SchemaError) as caught:
        parse_document(json.dumps(doc))
    assert caught.value.pointer == "/schema"


def test_non_certificate_document_is_refused():
    text = dump_document(encode_dga(projective_space(2, CFG).algebra))
    with pytest.raises(InputError):
        verify_certificate(text)


def random_pure_certificates(count: int):
    rng = np.random.default_rng(50)
    for seed in range(count):
        modulus = int(rng.integers(2, 7))
        alpha = Fraction(int(rng.integers(1, 2 * modulus)), 2)
        generated = random_pure(seed, alpha, modulus, CFG, max_degree=int(rng.integers(2, 7)))
        yield certificate_json(graded_formality_witness(generated.graded, alpha), CFG)


def tamper(doc, rng: np.random.Generator) -> str:
    """Change one entry of a certificate in a way the verifier must notice; returns what was changed."""
    bound = doc["overall_N"]
    upsilon = next(s for s in doc["stages"] if s["name"] == "upsilon")
    diagonal = [
        (n, j) for n, m in upsilon["maps"].items() if int(n) <= bound for j in range(min(m["rows"], m["cols"]))
    ]
    kinds = ["overall_N", "stage_flag", "composite_identity", "success"] + (["upsilon_entry"] if diagonal else [])
    kind = kinds[int(rng.integers(0, len(kinds)))]
    if kind == "overall_N":
        doc["overall_N"] = bound + 1
    elif kind == "stage_flag":
        doc["stages"][int(rng.integers(0, len(doc["stages"])))]["quasi_iso"] = False
    elif kind == "composite_identity":
        doc["composite_identity"] = False
    elif kind == "success":
        doc["success"] = False
    else:
        n, j = diagonal[int(rng.integers(0, len(diagonal)))]
        upsilon["maps"][n]["entries"][j][j] = 0
    return kind


def test_fresh_certificates_verify_and_tampering_is_caught():
    rng = np.random.default_rng(11)
    caught = {}
    for text in random_pure_certificates(50):
        assert verify_certificate(text).success
        doc = json.loads(text)
        kind = tamper(doc, rng)
        report = verify_certificate(json.dumps(doc))
        assert not report.success, kind
        caught[kind] = caught.get(kind, 0) + 1
    logger.info(f"tamperings caught: {caught}")
    assert sum(caught.values()) == 50


def test_gm_zigzag_certificate_verifies():
    generated = gm(CFG, "weil")
    witness = formality_zigzag_complex(generated.complex, generated.alpha, CFG)
    report = verify_certificate(certificate_json(witness, CFG))
    assert report.success, report.error_message
    assert report.overall_N == 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
