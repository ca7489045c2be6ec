"""
Formality Pipeline

Orchestrates the dg-algebra formality checks:
1. Validation and cohomology
2. Purity of cohomology (stored weights, or Tate weights read off phi)
3. Massey vanishing predicates and low-degree bounds
4. Free model and N-formality witness
"""

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .config import FieldConfig, ToolkitConfig, config
from .dga import (
    CohomologyAlgebra,
    ConnectivityReport,
    WeightedDGA,
    check_dga_map,
    cohomology_algebra,
    connectivity,
    dga_purity_check,
    low_degree_bound,
    validate,
    vanishing_predicate,
)
from .errors import InputError, PurityError, VerdictError
from .field_linalg import Matrix, is_zero
from .free_models import (
    FreeModel,
    build_free_model,
    formality_witness,
    weighted_model_from_tate,
    zero_differential_witness,
)
from .weights import PurityReport, _check_alpha, _tate_split, formality_degree, on_diagonal, parse_alpha
from .witness import FormalityWitness

logger = logging.getLogger(__name__)


class PipelineStage(Enum):
    """Stages of a pipeline run, in order."""
    VALIDATE = "validate"
    COHOMOLOGY = "cohomology"
    PURITY = "purity"
    PREDICATES = "predicates"
    MODEL = "model"
    WITNESS = "witness"


@dataclass
class PipelineReport:
    """Outcome of one pipeline run."""
    alpha: Fraction
    modulus: Optional[int]
    N: Optional[int] = None
    betti: Dict[int, int] = field(default_factory=dict)
    connectivity: Optional[ConnectivityReport] = None
    purity: Optional[PurityReport] = None
    massey: Dict[int, str] = field(default_factory=dict)        # k -> forced-vanish / not-forced
    massey_free_degree: Optional[int] = None
    model: Optional[FreeModel] = None
    witness: Optional[FormalityWitness] = None

    # Performance metrics
    stage_times: Dict[str, float] = field(default_factory=dict)
    total_time: float = 0.0

    # Status
    success: bool = False
    failed_stage: Optional[PipelineStage] = None
    error_message: Optional[str] = None


def tate_purity(a: WeightedDGA, phi: Matrix, cfg: FieldConfig, alpha,
                cohomology: Optional[CohomologyAlgebra] = None) -> PurityReport:
    """Purity of H(A) graded by the generalized eigenvalues q^k of H(phi)."""
    alpha = parse_alpha(alpha)
    h = cfg.h
    _check_alpha(alpha, h)
    field = a.field
    coh = cohomology or cohomology_algebra(a)
    induced = field.chain(coh.projection, phi, coh.section)
    dims: Dict[Tuple[int, int], int] = {}
    for n in coh.algebra.degrees:
        idx = coh.algebra.degree_indices(n)
        block = induced[idx][:, idx]
        for k, basis in _tate_split(field, block, cfg.q, h, locus=n):
            dims[(n, k)] = basis.shape[1]
    violations = [(n, k, dim) for (n, k), dim in sorted(dims.items()) if not on_diagonal(n, k, alpha, h)]
    return PurityReport(not violations, alpha, h, dims, violations)


class FormalityPipeline:
    """Complete formality check for one weighted dg-algebra."""

    def __init__(self, settings: Optional[ToolkitConfig] = None):
        """Initialize the pipeline.

        Args:
            settings: Toolkit configuration (defaults to the global instance)
        """
        self.settings = settings or config
        self.history: List[PipelineReport] = []

    def run(self, a: WeightedDGA, alpha, phi: Optional[Matrix] = None, cfg: Optional[FieldConfig] = None,
            force_model: bool = False, max_k: int = 5) -> PipelineReport:
        """Check purity, report Massey predicates and build an N-formality witness.

        Args:
            a: Weighted dg-algebra
            alpha: Slope of the weight diagonal
            phi: Algebra endomorphism; when given, weights come from its Tate grading
            cfg: Field configuration for phi (defaults to the algebra's)
            force_model: Build a free model even when d = 0
            max_k: Largest Massey order reported by the predicates

        Returns:
            PipelineReport with verdicts, timings and the witness
        """
        alpha = parse_alpha(alpha)
        cfg = cfg or a.field_config
        modulus = cfg.h if phi is not None else a.modulus
        if phi is not None and cfg.is_rational:
            raise InputError("Tate weights from phi need a finite field")
        report = PipelineReport(alpha=alpha, modulus=modulus, N=formality_degree(alpha, modulus))
        total_start = time.time()
        stage = PipelineStage.VALIDATE

        def timed(name: PipelineStage, start: float):
            report.stage_times[name.value] = time.time() - start

        try:
            # Step 1: Validation
            logger.info("🔍 Step 1: Validating dg-algebra")
            start = time.time()
            validation = validate(a)
            if not validation.valid:
                raise InputError(f"invalid dg-algebra: {validation.error_message}")
            if phi is not None:
                endo = check_dga_map(phi, a, a, check_quasi=False, compare_weights=False)
                if not endo.ok:
                    raise InputError(f"phi is not an algebra endomorphism: {endo.error_message}")
            timed(stage, start)

            # Step 2: Cohomology
            stage = PipelineStage.COHOMOLOGY
            logger.info("🧮 Step 2: Cohomology and connectivity")
            start = time.time()
            coh = cohomology_algebra(a)
            report.betti = coh.betti()
            report.connectivity = connectivity(a, coh)
            timed(stage, start)
            logger.info(f"✅ Betti numbers {report.betti}, r = {report.connectivity.r}")

            # Step 3: Purity
            stage = PipelineStage.PURITY
            logger.info(f"⚖️ Step 3: Purity with alpha = {alpha}")
            start = time.time()
            if phi is not None:
                report.purity = tate_purity(a, phi, cfg, alpha, coh)
            else:
                report.purity = dga_purity_check(a, alpha, coh)
            timed(stage, start)
            if not report.purity.is_pure:
                n, p, _ = report.purity.violations[0]
                raise PurityError(report.purity.error_message, locus=(n, p))
            logger.info("✅ Cohomology is pure")

            # Step 4: Massey predicates
            stage = PipelineStage.PREDICATES
            start = time.time()
            for k in range(3, max_k + 1):
                report.massey[k] = vanishing_predicate(alpha, modulus, k).value
            r = report.connectivity.r if report.connectivity.connected else None
            if modulus is not None and r:
                report.massey_free_degree = low_degree_bound(alpha, modulus, r)
            timed(stage, start)
            logger.info(f"✅ Massey predicates {report.massey}")

            # Step 5: Model and witness
            stage = PipelineStage.MODEL
            if not report.connectivity.simply_connected:
                raise VerdictError("the witness needs a simply connected algebra (H^1 = 0)", locus=1)
            start = time.time()
            shortcut = self.settings.model.shortcut_zero_differential and not force_model
            if phi is None and shortcut and is_zero(a.diff):
                logger.info("🎯 Step 5: Zero differential, identity witness")
                timed(stage, start)
                stage = PipelineStage.WITNESS
                start = time.time()
                report.witness = zero_differential_witness(a, alpha)
            else:
                logger.info("🏗️ Step 5: Free model")
                if phi is not None:
                    bound = report.N if report.N is not None else self.settings.model.integer_weight_degree
                    report.model = weighted_model_from_tate(a, phi, cfg, bound, self.settings.model)
                else:
                    report.model = build_free_model(a, alpha, settings=self.settings.model)
                timed(stage, start)
                if not report.model.success:
                    raise VerdictError(report.model.error_message or "model verification failed")
                stage = PipelineStage.WITNESS
                logger.info("🧾 Step 6: Formality witness")
                start = time.time()
                report.witness = formality_witness(report.model, alpha)
            timed(stage, start)

            report.success = report.witness.success
            if not report.success:
                report.failed_stage = PipelineStage.WITNESS
                report.error_message = report.witness.error_message
            else:
                bound = report.N if report.N is not None else "all"
                logger.info(f"🚀 Pipeline complete: {bound}-formality witnessed")

        except VerdictError as e:
            report.success = False
            report.failed_stage = stage
            report.error_message = str(e)
            logger.info(f"❌ Pipeline stopped at {stage.value}: {e}")

        report.total_time = time.time() - total_start
        self.history.append(report)
        return report


def run_pipeline(a: WeightedDGA, alpha, phi: Optional[Matrix] = None, cfg: Optional[FieldConfig] = None,
                 force_model: bool = False, settings: Optional[ToolkitConfig] = None) -> PipelineReport:
    """Run a fresh FormalityPipeline once."""
    return FormalityPipeline(settings).run(a, alpha, phi=phi, cfg=cfg, force_model=force_model)
