"""
Formality Certificates

A certificate is a witness serialized with every object and map in full.
verify_certificate() trusts none of the stored flags: it rebuilds the
objects, re-checks every stage map, the composite identity, the weight
checks and the degree bound, and fails on the first stored flag that
disagrees with the recomputation.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np

from .complexes import (
    Complex,
    EndoComplex,
    HoMorphism,
    is_chain_map,
    is_n_quasi_iso,
    premorphism_differential,
)
from .config import FieldConfig
from .dga import WeightedDGA, check_dga_map, cohomology_algebra, dga_purity_check, validate
from .errors import InputError
from .field_linalg import equal, is_zero
from .free_models import eigenvalues_match, strip_checks
from .serialization import CertificateDoc, decode_witness, dump_document, encode_witness, parse_document
from .weights import GradedComplex, formality_degree, purity_check, zigzag_composite_identity
from .witness import FormalityWitness, StageKind, WitnessStage

logger = logging.getLogger(__name__)


@dataclass
class VerificationReport:
    """Result of re-checking a certificate from its raw data."""
    stages: Dict[str, bool] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)
    objects: Dict[str, bool] = field(default_factory=dict)
    composite_identity: bool = False
    overall_N: Optional[int] = None
    failures: List[str] = field(default_factory=list)     # in certificate order
    unverified: List[str] = field(default_factory=list)   # stored checks with no recomputation

    success: bool = False
    error_message: Optional[str] = None

    @property
    def failed_stage(self) -> Optional[str]:
        return self.failures[0] if self.failures else None


def certificate_json(witness: FormalityWitness, cfg: FieldConfig) -> str:
    """Byte-stable certificate text for a witness."""
    return dump_document(encode_witness(witness, cfg))


def _plain(obj) -> Complex:
    if isinstance(obj, (GradedComplex, EndoComplex)):
        return obj.complex
    return obj


def _check_dga_stage(stage: WitnessStage, witness: FormalityWitness) -> bool:
    source, target = witness.objects[stage.source], witness.objects[stage.target]
    if not isinstance(source, WeightedDGA) or not isinstance(target, WeightedDGA):
        return False
    options = stage.options
    report = check_dga_map(
        stage.maps, source, target, quasi_bound=stage.verified_N,
        chain_top=options.get("chain_top"), mult_top=options.get("mult_top"),
        compare_weights=options.get("compare_weights", True),
    )
    if not report.ok:
        return False
    if stage.homotopy is None:
        return True
    phi_source = witness.endomorphisms.get(stage.source)
    phi_target = witness.endomorphisms.get(stage.target)
    if phi_source is None or phi_target is None:
        return False
    f = source.field
    for a, phi in ((source, phi_source), (target, phi_target)):
        if phi.shape != (a.dim, a.dim) or not equal(f.mul(a.diff, phi), f.mul(phi, a.diff)):
            return False
    homotopy, fmat = stage.homotopy, stage.maps
    if homotopy.shape != fmat.shape:
        return False
    defect = f.add(
        f.mul(target.diff, homotopy), f.mul(homotopy, source.diff),
        f.scale(-1, f.mul(phi_target, fmat)), f.mul(fmat, phi_source),
    )
    top = options.get("chain_top")
    columns = [i for i, b in enumerate(source.basis) if top is None or b.degree <= top]
    return is_zero(defect[:, columns])


def _check_complex_stage(stage: WitnessStage, witness: FormalityWitness) -> bool:
    source, target = witness.objects[stage.source], witness.objects[stage.target]
    if isinstance(source, WeightedDGA) or isinstance(target, WeightedDGA):
        return False
    if stage.kind is StageKind.HO:
        if not isinstance(source, EndoComplex) or not isinstance(target, EndoComplex):
            return False
        morphism = HoMorphism(source, target, stage.maps, stage.homotopy or {}, check=False)
        if not premorphism_differential(morphism).is_zero():
            return False
        return is_n_quasi_iso(morphism.f, source.complex, target.complex, stage.verified_N).is_quasi_iso
    s, t = _plain(source), _plain(target)
    return is_chain_map(stage.maps, s, t) and is_n_quasi_iso(stage.maps, s, t, stage.verified_N).is_quasi_iso


def check_stage(stage: WitnessStage, witness: FormalityWitness) -> bool:
    """Recompute one stage verdict; malformed maps count as failures."""
    try:
        if stage.kind is StageKind.DGA:
            return _check_dga_stage(stage, witness)
        return _check_complex_stage(stage, witness)
    except (InputError, ValueError, KeyError) as e:
        logger.debug(f"Stage {stage.name} raised {e}")
        return False


def _composite(witness: FormalityWitness) -> bool:
    names = [s.name for s in witness.stages]
    try:
        if "psi" in names:
            graded, tau = witness.objects["A"], witness.objects["tau A"]
            inclusion = witness.stage("tau_inclusion").maps
            return zigzag_composite_identity(graded, tau.complex, inclusion, witness.stage("psi").maps,
                                             witness.overall_N)
        if "projection" in names:
            stage = witness.stage("projection")
            top = witness.overall_N if witness.overall_N is not None else stage.verified_N
        else:
            stage, top = witness.stage("cohomology"), None
        source = witness.objects[stage.source]
        hs = cohomology_algebra(source)
        induced = source.field.mul(stage.maps, hs.section)
        if induced.shape[0] != induced.shape[1]:
            return False
        low = [i for i, b in enumerate(hs.algebra.basis) if top is None or b.degree <= top]
        return equal(induced[np.ix_(low, low)], source.field.identity(len(low)))
    except (InputError, ValueError, KeyError) as e:
        logger.debug(f"Composite check raised {e}")
        return False


def _recompute_checks(witness: FormalityWitness, report: VerificationReport, q: Optional[int]):
    objects = witness.objects
    if "M" in objects and isinstance(objects["M"], WeightedDGA):
        m = objects["M"]
        top = witness.overall_N if witness.overall_N is not None else (m.degree_cap or m.top_degree) - 1
        report.checks.update(strip_checks(m, witness.alpha, top))
        report.checks["differential_squares_to_zero"] = is_zero(m.field.mul(m.diff, m.diff))
        phi = witness.endomorphisms.get("M")
        if phi is not None:
            report.checks["endo_commutes"] = equal(m.field.mul(m.diff, phi), m.field.mul(phi, m.diff))
            report.checks["ho_morphism_closed"] = report.stages.get("model", False)
            if q is not None:
                report.checks["weights_match_eigenvalues"] = eigenvalues_match(m, phi, q)
    elif "A" in objects and isinstance(objects["A"], GradedComplex):
        report.checks["pure"] = purity_check(objects["A"], witness.alpha).is_pure
    elif "A" in objects and isinstance(objects["A"], WeightedDGA):
        report.checks["pure"] = dga_purity_check(objects["A"], witness.alpha).is_pure


def verify_witness(witness: FormalityWitness, cfg: Optional[FieldConfig] = None) -> VerificationReport:
    """Re-derive every flag of a decoded witness and compare with the stored ones."""
    report = VerificationReport()
    for name, obj in witness.objects.items():
        report.objects[name] = validate(obj).valid if isinstance(obj, WeightedDGA) else True
        if not report.objects[name]:
            report.failures.append(f"object {name}")

    report.overall_N = formality_degree(witness.alpha, witness.modulus)
    if report.overall_N != witness.overall_N:
        report.failures.append("overall_N")

    for stage in witness.stages:
        ok = check_stage(stage, witness)
        report.stages[stage.name] = ok
        if not ok or ok != stage.quasi_iso:
            report.failures.append(stage.name)

    report.composite_identity = _composite(witness)
    if not report.composite_identity or report.composite_identity != witness.composite_identity:
        report.failures.append("composite_identity")

    _recompute_checks(witness, report, None if cfg is None else cfg.q)
    for name, stored in witness.checks.items():
        if name not in report.checks:
            report.unverified.append(name)
            if not stored:
                report.failures.append(f"check {name}")
        elif stored != report.checks[name]:
            report.failures.append(f"check {name}")
    for name, ok in report.checks.items():
        if not ok and f"check {name}" not in report.failures:
            report.failures.append(f"check {name}")

    if not witness.stages:
        report.failures.append("stages")
    if not report.failures and not witness.success:
        report.failures.append("success")

    report.success = not report.failures
    if report.success:
        logger.info(f"✅ Certificate verified ({len(witness.stages)} stages)")
    else:
        report.error_message = f"verification failed at {report.failures[0]}"
        logger.info(f"❌ {report.error_message}")
    return report


def verify_certificate(document: Union[str, CertificateDoc]) -> VerificationReport:
    """Parse (when given text) and verify a certificate."""
    doc = parse_document(document) if isinstance(document, str) else document
    if not isinstance(doc, CertificateDoc):
        raise InputError(f"expected a certificate, got a {doc.kind} document")
    witness, cfg = decode_witness(doc)
    return verify_witness(witness, cfg)
