"""
Test script for weight gradings, purity and the truncation zig-zag
"""

import logging
import math
import sys
import os
from fractions import Fraction

import numpy as np
import pytest
from sympy import primerange

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.complexes import Complex, EndoComplex
from formality.config import FieldConfig
from formality.errors import InputError, NotTateError, UnsupportedEigenvalueError
from formality.generators import gm, projective_space, random_pure, random_tate
from formality.weights import (
    check_psi_monoidality,
    formality_degree,
    formality_zigzag_complex,
    grade_complex,
    graded_formality_witness,
    on_diagonal,
    order_of_q,
    parse_alpha,
    psi_map,
    purity_check,
    t_leq_N,
    tate_grade_module,
    truncation_tau,
    weil_grade_module,
)

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

CFG = FieldConfig(characteristic=7, q=2)
F7 = CFG.field


def tate_complex(impure: bool = False) -> EndoComplex:
    """Homology k(0) in degree 0 and k(1) in degree 2, plus an acyclic weight-2 pair in degrees 3 -> 4.

    With impure=True an extra class of weight 1 sits in degree 1, off the slope-1/2 diagonal.
    """
    dims = {0: 1, 2: 1, 3: 1, 4: 1}
    endo = {0: F7.matrix([[1]]), 2: F7.matrix([[2]]), 3: F7.matrix([[4]]), 4: F7.matrix([[4]])}
    if impure:
        dims[1] = 1
        endo[1] = F7.matrix([[2]])
    return EndoComplex(Complex(field=F7, dims=dims, diff={4: F7.matrix([[1]])}), endo)


def test_alpha_parsing_and_bounds():
    assert parse_alpha("1/2") == Fraction(1, 2)
    assert parse_alpha(3) == Fraction(3)
    with pytest.raises(InputError):
        parse_alpha(0.5)
    with pytest.raises(InputError):
        parse_alpha("half")
    assert order_of_q(CFG) == 3
    assert formality_degree(Fraction(1, 2), 3) == 4
    assert formality_degree(Fraction(1), None) is None
    assert on_diagonal(2, 1, Fraction(1, 2), 3)
    assert on_diagonal(8, 1, Fraction(1, 2), 3)
    assert not on_diagonal(1, 0, Fraction(1, 2), 3)


def test_tate_grading_of_a_module():
    grading = tate_grade_module(F7.matrix([[1, 0, 0], [0, 2, 1], [0, 0, 2]]), CFG)
    assert grading.dims(0) == {0: 1, 1: 2}


def test_non_tate_eigenvalue_is_refused():
    with pytest.raises(NotTateError) as caught:
        tate_grade_module(F7.matrix([[1, 0], [0, 3]]), CFG)
    assert caught.value.defect == 1


def test_weil_grading_over_q():
    cfg = FieldConfig(characteristic=0, q=2)
    q_field = cfg.field
    grading = weil_grade_module(q_field.matrix([[1, 0, 0], [0, 2, 0], [0, 0, "1/4"]]), cfg)
    assert grading.dims(0) == {-4: 1, 0: 1, 2: 1}
    with pytest.raises(UnsupportedEigenvalueError):
        weil_grade_module(q_field.matrix([[3]]), cfg)


def test_random_tate_grading_recovers_planted_weights():
    generated = random_tate(7, CFG)
    graded = grade_complex(generated.complex, CFG)
    for n, pieces in generated.planted.items():
        assert graded.grading.dims(n) == {k: d for k, d in pieces.items() if d}


def test_contaminated_complex_is_not_tate():
    generated = random_tate(7, CFG, contaminate=True)
    with pytest.raises(NotTateError):
        grade_complex(generated.complex, CFG)


def test_purity_of_random_pure_complexes():
    for seed in range(4):
        generated = random_pure(seed, "1/2", 3, CFG)
        assert purity_check(generated.graded, "1/2").is_pure

    impure = grade_complex(tate_complex(impure=True), CFG)
    report = purity_check(impure, "1/2")
    assert not report.is_pure
    assert report.violations[0][:2] == (1, 1)


def test_truncations_are_quasi_isomorphisms():
    graded = grade_complex(tate_complex(), CFG)
    truncation = truncation_tau(graded, Fraction(1, 2))
    assert truncation.graded.complex.dims == {0: 1, 2: 1}

    canonical = t_leq_N(tate_complex().complex, 3)
    assert canonical.report.is_quasi_iso
    assert canonical.complex.dims == {0: 1, 2: 1}
    assert canonical.complex.dim(3) == 0

    psi = psi_map(graded, Fraction(1, 2))
    assert psi.bound == 4
    assert psi.report.is_quasi_iso


def test_psi_is_monoidal():
    a = grade_complex(tate_complex(), CFG)
    report = check_psi_monoidality(a, a, Fraction(1, 2))
    assert report.commutes
    assert report.checked_degrees


def test_complex_zigzag_witness():
    witness = formality_zigzag_complex(tate_complex(), "1/2", CFG)
    assert witness.success
    assert witness.overall_N == 4
    assert witness.composite_identity
    assert [s.name for s in witness.stages] == ["model", "grading", "tau_inclusion", "psi", "upsilon"]


def test_zigzag_refuses_impure_complex():
    witness = formality_zigzag_complex(tate_complex(impure=True), "1/2", CFG)
    assert not witness.success
    assert "off the weight diagonal" in witness.error_message


def test_graded_witness_for_random_pure_complex():
    generated = random_pure(2, "1/2", 3, CFG)
    witness = graded_formality_witness(generated.graded, "1/2")
    assert witness.success
    assert witness.overall_N == 4


def test_alpha_out_of_range():
    witness = formality_zigzag_complex(tate_complex(), "1/2", CFG)
    assert witness.success
    with pytest.raises(InputError):
        formality_zigzag_complex(tate_complex(), "5", CFG)


def brute_force_order(q: int, characteristic: int) -> int:
    k, power = 1, q % characteristic
    while power != 1:
        power = power * q % characteristic
        k += 1
    return k


def test_order_of_q_against_brute_force():
    rng = np.random.default_rng(17)
    primes = list(primerange(2, 2000))
    for _ in range(1000):
        characteristic = int(rng.choice(primes))
        q = int(rng.integers(1, characteristic)) if characteristic > 2 else 1
        cfg = FieldConfig(characteristic=characteristic, q=q)
        expected = brute_force_order(q, characteristic)
        assert order_of_q(cfg) == expected, (q, characteristic)
        assert cfg.h == expected


def test_tate_grading_recovers_planted_weights_at_scale():
    for characteristic, count in ((5, 67), (7, 66), (11, 67)):
        cfg = FieldConfig(characteristic=characteristic, q=2)
        for seed in range(count):
            generated = random_tate(seed, cfg)
            graded = grade_complex(generated.complex, cfg)
            for n in generated.complex.complex.degrees:
                pieces = graded.grading.dims(n)
                planted = {k: d for k, d in generated.planted.get(n, {}).items() if d}
                assert pieces == planted, (characteristic, seed, n)
                assert sum(pieces.values()) == generated.complex.complex.dim(n)


def random_pure_parameters(rng: np.random.Generator):
    """(alpha, modulus) with modulus in 2..6 and alpha < modulus."""
    while True:
        modulus = int(rng.integers(2, 7))
        alpha = Fraction(int(rng.integers(1, 5)), 2)
        if alpha < modulus:
            return alpha, modulus


def test_truncation_pipeline_on_random_pure_complexes():
    rng = np.random.default_rng(99)
    for seed in range(200):
        alpha, modulus = random_pure_parameters(rng)
        max_degree = int(rng.integers(2, 11))
        generated = random_pure(seed, alpha, modulus, CFG, max_degree=max_degree)
        witness = graded_formality_witness(generated.graded, alpha)
        assert witness.success, (seed, alpha, modulus, witness.error_message)
        assert witness.overall_N == math.floor((modulus - 1) / alpha)
        assert witness.stage("tau_inclusion").quasi_iso
        assert witness.stage("psi").verified_N == witness.overall_N
        assert witness.stage("upsilon").quasi_iso
        assert witness.composite_identity


def test_psi_monoidality_on_random_pairs():
    rng = np.random.default_rng(7)
    for seed in range(100):
        alpha, modulus = random_pure_parameters(rng)
        a = random_pure(2 * seed, alpha, modulus, CFG, max_degree=3)
        b = random_pure(2 * seed + 1, alpha, modulus, CFG, max_degree=3)
        report = check_psi_monoidality(a.graded, b.graded, alpha)
        assert report.commutes, (seed, alpha, modulus, report.failing_degrees)


def test_gm_complex_is_formal_up_to_half_the_order():
    for characteristic in (7, 11, 13):
        cfg = FieldConfig(characteristic=characteristic, q=2)
        generated = gm(cfg, "weil")
        assert generated.alpha == 2
        graded = grade_complex(generated.complex, cfg)
        assert graded.grading.dims(0) == {0: 1}
        assert graded.grading.dims(1) == {2: 1}
        witness = formality_zigzag_complex(generated.complex, generated.alpha, cfg)
        assert witness.success, witness.error_message
        assert witness.overall_N == (cfg.h - 1) // 2
        assert witness.stage("grading").quasi_iso


def test_gm_complex_over_q_is_fully_formal():
    cfg = FieldConfig(characteristic=0, q=2)
    generated = gm(cfg)
    witness = formality_zigzag_complex(generated.complex, generated.alpha, cfg)
    assert witness.success
    assert witness.overall_N is None


def test_projective_plane_complex_zigzag():
    generated = projective_space(2, CFG)
    assert generated.complex.complex.dims == {0: 1, 2: 1, 4: 1}
    witness = formality_zigzag_complex(generated.complex, generated.alpha, CFG)
    assert witness.success
    assert witness.overall_N == 4


def test_negative_degrees_are_refused_with_a_locus():
    a = gm(CFG, "weil").algebra
    phi = gm(CFG, "weil").endo
    cochains = EndoComplex(
        a.as_complex(), {n: phi[np.ix_(a.degree_indices(n), a.degree_indices(n))] for n in a.degrees}
    )
    witness = formality_zigzag_complex(cochains, 2, CFG)
    assert not witness.success
    assert witness.locus == (-1,)
    assert "negative degree" in witness.error_message


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
