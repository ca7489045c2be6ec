"""
Test script for complexes and the ho-morphism calculus
Covers homology, quasi-isomorphisms, tensor products, D^2 = 0,
homotopies, mapping cylinders and homology models
"""

import logging
import sys
import os
from functools import reduce

import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.complexes import (
    Complex,
    EndoComplex,
    HoMorphism,
    PreMorphism,
    Variance,
    cylinder_inclusions,
    cylinder_projection,
    find_homotopy,
    ho_compose,
    homology,
    homology_model,
    identity_ho_morphism,
    is_chain_map,
    is_n_quasi_iso,
    mapping_cylinder,
    premorphism_differential,
    tensor,
)
from formality.config import FieldConfig
from formality.errors import InputError
from formality.field_linalg import Field, char_poly, poly_mul, random_matrix
from formality.generators import random_tate

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)

F7 = Field(7)
CFG = FieldConfig(characteristic=7, q=2)


def interval() -> Complex:
    """k <- k in degrees 0 and 1 with identity differential: acyclic."""
    return Complex(field=F7, dims={0: 1, 1: 1}, diff={1: F7.matrix([[1]])})


def sample_endo_complex(seed: int = 0) -> EndoComplex:
    return random_tate(seed, CFG).complex


def test_homology_dimensions():
    assert homology(interval()).dims == {}
    circle = Complex(field=F7, dims={0: 1, 1: 1})
    assert homology(circle).dims == {0: 1, 1: 1}


def test_d_squared_must_vanish():
    with pytest.raises(InputError):
        Complex(field=F7, dims={0: 1, 1: 1, 2: 1}, diff={1: F7.matrix([[1]]), 2: F7.matrix([[1]])})
    with pytest.raises(InputError):
        Complex(field=F7, dims={0: 1, 1: 2}, diff={1: F7.matrix([[1]])})


def test_variance_flip_keeps_homology():
    c = Complex(field=F7, dims={0: 1, 1: 2, 2: 1}, diff={1: F7.matrix([[1, 0]]), 2: F7.matrix([[0], [1]])})
    flipped = c.with_variance(Variance.COHOMOLOGICAL)
    assert flipped.variance is Variance.COHOMOLOGICAL
    assert homology(flipped).dims == {-n: d for n, d in homology(c).dims.items()}


def test_quasi_iso_and_bounds():
    source = Complex(field=F7, dims={0: 1, 2: 1})
    target = Complex(field=F7, dims={0: 1, 2: 1, 3: 1})
    f = {0: F7.identity(1), 2: F7.identity(1)}
    assert is_chain_map(f, source, target)
    report = is_n_quasi_iso(f, source, target)
    assert not report.is_quasi_iso
    assert report.failing_degrees == [3]
    assert is_n_quasi_iso(f, source, target, bound=2).is_quasi_iso


def test_tensor_with_acyclic_is_acyclic():
    circle = Complex(field=F7, dims={0: 1, 1: 1})
    product = tensor(circle, interval())
    assert product.dims == {0: 1, 1: 2, 2: 1}
    assert homology(product).dims == {}
    assert homology(tensor(circle, circle)).dims == {0: 1, 1: 2, 2: 1}


def test_premorphism_differential_squares_to_zero():
    x = sample_endo_complex(1)
    rng = np.random.default_rng(5)
    c = x.complex
    for degree in (0, 1, 2):
        f = {k: random_matrix(F7, c.dim(k - degree), c.dim(k), rng) for k in c.degrees}
        F = {k: random_matrix(F7, c.dim(k - degree + 1), c.dim(k), rng) for k in c.degrees}
        p = PreMorphism(x, x, degree, f, F)
        assert premorphism_differential(premorphism_differential(p)).is_zero()


def test_identity_and_composition():
    x = sample_endo_complex(2)
    identity = identity_ho_morphism(x)
    model = homology_model(x)
    composite = ho_compose(identity, model.morphism)
    assert composite.equals(model.morphism)


def test_homotopy_between_equal_morphisms():
    x = sample_endo_complex(3)
    identity = identity_ho_morphism(x)
    homotopy = find_homotopy(identity, identity)
    assert homotopy is not None
    assert premorphism_differential(homotopy).is_zero()


def test_non_closed_pair_is_rejected():
    x = EndoComplex(Complex(field=F7, dims={0: 2}), {0: F7.matrix([[1, 0], [0, 2]])})
    with pytest.raises(InputError):
        HoMorphism(x, x, {0: F7.matrix([[0, 1], [0, 0]])})
    unchecked = HoMorphism(x, x, {0: F7.matrix([[0, 1], [0, 0]])}, check=False)
    assert not premorphism_differential(unchecked).is_zero()


def test_homology_model_is_quasi_iso():
    x = sample_endo_complex(5)
    model = homology_model(x)
    assert model.report.is_quasi_iso
    assert model.model.complex.dims == homology(x.complex).dims
    assert premorphism_differential(model.morphism).is_zero()


def test_mapping_cylinder():
    x = sample_endo_complex(6)
    morphism = homology_model(x).morphism
    cylinder = mapping_cylinder(morphism)
    projection = cylinder_projection(morphism, cylinder)
    assert is_n_quasi_iso(projection.f, cylinder.complex, x.complex).is_quasi_iso

    source, target = morphism.source, morphism.target
    for n in cylinder.complex.degrees:
        expected = poly_mul(
            F7,
            poly_mul(F7, char_poly(F7, source.phi(n - 1)), char_poly(F7, target.phi(n))),
            char_poly(F7, source.phi(n)),
        )
        assert char_poly(F7, cylinder.phi(n)) == expected

    for inclusion in cylinder_inclusions(morphism, cylinder):
        assert premorphism_differential(inclusion).is_zero()


def total_char_poly(x: EndoComplex):
    """Characteristic polynomial of the endomorphism on the whole complex."""
    field = x.field
    return reduce(lambda p, r: poly_mul(field, p, r), (char_poly(field, x.phi(n)) for n in x.complex.degrees), [1])


def test_cylinder_char_poly_is_cube_of_source():
    """On Cyl(f) for f : (C, phi) -> (C, phi) the endomorphism has characteristic polynomial P_phi^3."""
    rng = np.random.default_rng(2024)
    quasi_isos = 0
    for seed in range(100):
        x = sample_endo_complex(seed)
        c = x.complex
        a, b, e = (int(v) for v in rng.integers(0, 7, size=3))
        f = {
            n: F7.add(F7.scalar_matrix(a, c.dim(n)), F7.scale(b, x.phi(n)), F7.scale(e, F7.mul(x.phi(n), x.phi(n))))
            for n in c.degrees
        }
        morphism = HoMorphism(x, x, f)
        cylinder = mapping_cylinder(morphism)

        p = total_char_poly(x)
        assert total_char_poly(cylinder) == poly_mul(F7, poly_mul(F7, p, p), p), f"seed {seed}"
        if is_n_quasi_iso(f, c, c).is_quasi_iso:
            quasi_isos += 1
            assert homology(cylinder.complex).dims == homology(c).dims, f"seed {seed}"
    logger.info(f"cylinder identity checked on 100 ho-morphisms, {quasi_isos} quasi-isomorphisms")
    assert quasi_isos > 0


def test_homology_model_of_every_generated_complex():
    for characteristic in (5, 7, 11):
        cfg = FieldConfig(characteristic=characteristic, q=2)
        for seed in range(20):
            x = random_tate(seed, cfg).complex
            model = homology_model(x)
            assert model.report.is_quasi_iso
            assert premorphism_differential(model.morphism).is_zero()


def test_identity_is_not_homotopic_to_zero_with_homology():
    checked = 0
    for seed in range(20):
        x = sample_endo_complex(seed)
        if not homology(x.complex).dims:
            continue
        zero = HoMorphism(x, x, {})
        assert find_homotopy(identity_ho_morphism(x), zero) is None
        checked += 1
    assert checked > 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
