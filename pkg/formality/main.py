"""
Formality Toolkit Command Line

Entry point tying the toolkit together: generate inputs, validate and grade
them, check purity, build models, emit formality certificates and re-verify
them, compute Massey products.

Exit status: 0 when every check is green, 1 when a mathematical verdict is
negative, 2 for malformed input or usage errors. Reports go to stdout,
logs to stderr.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from .certificates import certificate_json, verify_certificate
from .complexes import EndoComplex, cylinder_projection, homology, homology_model, is_n_quasi_iso, mapping_cylinder
from .config import FieldConfig, ToolkitConfig, load_config
from .dga import dga_purity_check, k_massey, validate, vanishing_predicate
from .errors import InputError, SchemaError, VerdictError
from .field_linalg import char_poly, poly_mul
from .free_models import build_free_model, formality_witness, weighted_model_from_tate
from .generators import GeneratorSpec, generate
from .pipeline import FormalityPipeline, tate_purity
from .serialization import (
    CertificateDoc,
    ComplexDoc,
    DGADoc,
    FreeModelDoc,
    _schema_error,
    alpha_hint,
    decode_complex,
    decode_dga,
    decode_field,
    decode_free_model,
    dump_document,
    encode_complex,
    encode_dga,
    encode_free_model,
    parse_document,
)
from .weights import (
    formality_degree,
    formality_zigzag_complex,
    grade_complex,
    graded_formality_witness,
    parse_alpha,
    purity_check,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_INPUT = 2

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


@dataclass
class CommandResult:
    """Report of one subcommand; `document` replaces the JSON report when present."""
    payload: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    status: int = EXIT_OK
    document: Optional[str] = None


# -- input helpers ------------------------------------------------------------------

def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def load_document(path: str):
    return parse_document(read_text(path))


def resolve_alpha(args, doc) -> Any:
    if args.alpha is not None:
        return parse_alpha(args.alpha)
    hint = alpha_hint(doc)
    if hint is None:
        raise InputError("--alpha is required for this input")
    return hint


def endo_complex_of(doc) -> EndoComplex:
    if isinstance(doc, DGADoc):
        a, endo = decode_dga(doc)
        if endo is None:
            raise InputError("the dg-algebra carries no endomorphism")
        return a.dual_endo_complex(endo)
    if isinstance(doc, ComplexDoc) and doc.kind == "endo_complex":
        return decode_complex(doc).homological()
    raise InputError(f"expected a complex with endomorphism, got a {doc.kind} document")


def _violations(report) -> List[Dict[str, int]]:
    return [{"degree": n, "weight": p, "dim": dim} for n, p, dim in report.violations]


def _planted(meta: Dict[str, Any]) -> Optional[Dict[int, Dict[int, int]]]:
    planted = meta.get("planted")
    if not planted:
        return None
    return {int(n): {int(p): int(dim) for p, dim in pieces.items()} for n, pieces in planted.items()}


# -- subcommands ------------------------------------------------------------------------

def cmd_gen(args, settings: ToolkitConfig) -> CommandResult:
    cfg = settings.field
    if args.l is not None or args.q is not None:
        cfg = FieldConfig(
            characteristic=args.l if args.l is not None else cfg.characteristic,
            q=args.q if args.q is not None else cfg.q,
        )
    params = {
        "kind": args.kind, "n": args.n, "points": args.points, "d": args.d, "seed": args.seed,
        "modulus": args.modulus, "normalization": args.normalization, "contaminate": args.contaminate,
        "field": cfg,
    }
    if args.alpha is not None:
        params["alpha"] = args.alpha
    try:
        spec = GeneratorSpec(**params)
    except ValidationError as e:
        raise _schema_error(e) from None
    generated = generate(spec)
    meta = {
        "generator": generated.kind,
        "alpha": str(generated.alpha),
        "modulus": generated.modulus,
        "description": generated.description,
    }
    if generated.planted:
        meta["planted"] = {
            str(n): {str(p): dim for p, dim in sorted(pieces.items())} for n, pieces in sorted(generated.planted.items())
        }
    if generated.algebra is not None:
        doc = encode_dga(generated.algebra, generated.endo, meta)
    elif generated.graded is not None:
        doc = encode_complex(generated.graded, cfg, meta)
    else:
        doc = encode_complex(generated.complex, cfg, meta)
    lines = [f"✅ Generated {generated.description} over {cfg.describe()} (alpha = {generated.alpha})"]
    return CommandResult(payload=meta, lines=lines, document=dump_document(doc))


def cmd_validate(args, settings: ToolkitConfig) -> CommandResult:
    doc = load_document(args.input)
    payload: Dict[str, Any] = {"kind": doc.kind}
    try:
        if isinstance(doc, DGADoc):
            a, _ = decode_dga(doc)
            report = validate(a)
            payload["valid"] = report.valid
            payload["violations"] = [
                {"kind": v.kind, "locus": list(v.locus), "message": v.message} for v in report.violations
            ]
            payload["error"] = report.error_message
        elif isinstance(doc, ComplexDoc):
            decode_complex(doc)
            payload["valid"] = True
        elif isinstance(doc, FreeModelDoc):
            model = decode_free_model(doc)
            payload["valid"] = model.success
            payload["checks"] = model.checks
            payload["error"] = model.error_message
        else:
            payload["valid"] = True
    except InputError as e:
        payload["valid"] = False
        payload["error"] = str(e)
    status = EXIT_OK if payload["valid"] else EXIT_VERDICT
    mark = "✅" if payload["valid"] else "❌"
    lines = [f"{mark} {doc.kind} document {'is valid' if payload['valid'] else 'is invalid'}"]
    if payload.get("error"):
        lines.append(f"   {payload['error']}")
    return CommandResult(payload=payload, lines=lines, status=status)


def cmd_grade(args, settings: ToolkitConfig) -> CommandResult:
    doc = load_document(args.input)
    cfg = decode_field(doc.field)
    x = endo_complex_of(doc)
    graded = grade_complex(x, cfg)
    dims = {n: graded.grading.dims(n) for n in graded.complex.degrees}
    meta: Dict[str, Any] = {"dims": {str(n): {str(p): d for p, d in pieces.items()} for n, pieces in dims.items()}}
    planted = _planted(getattr(doc, "meta", {}))
    if planted is not None:
        meta["matches_planted"] = {n: pieces for n, pieces in dims.items() if pieces} == {
            n: {p: d for p, d in pieces.items() if d} for n, pieces in planted.items() if any(pieces.values())
        }
    lines = [f"✅ Graded over {cfg.describe()}"]
    lines += [f"   degree {n}: " + ", ".join(f"weight {p} x{d}" for p, d in pieces.items()) for n, pieces in dims.items()]
    status = EXIT_VERDICT if meta.get("matches_planted") is False else EXIT_OK
    return CommandResult(payload=meta, lines=lines, status=status,
                         document=dump_document(encode_complex(graded, cfg, meta)))


def cmd_purity(args, settings: ToolkitConfig) -> CommandResult:
    doc = load_document(args.input)
    alpha = resolve_alpha(args, doc)
    cfg = decode_field(doc.field)
    if isinstance(doc, DGADoc):
        a, endo = decode_dga(doc)
        if args.tate:
            if endo is None:
                raise InputError("--tate needs a dg-algebra with an endomorphism")
            report = tate_purity(a, endo, cfg, alpha)
        else:
            report = dga_purity_check(a, alpha)
    elif isinstance(doc, ComplexDoc) and doc.kind == "graded_complex":
        report = purity_check(decode_complex(doc), alpha)
    elif isinstance(doc, ComplexDoc) and doc.kind == "endo_complex":
        report = purity_check(grade_complex(endo_complex_of(doc), cfg), alpha)
    else:
        raise InputError(f"purity needs weights; got a {doc.kind} document")
    payload = {
        "pure": report.is_pure,
        "alpha": str(report.alpha),
        "modulus": report.modulus,
        "violations": _violations(report),
    }
    if report.is_pure:
        lines = [f"✅ Pure of slope {report.alpha}"]
    else:
        lines = [f"❌ {report.error_message}"]
    return CommandResult(payload=payload, lines=lines, status=EXIT_OK if report.is_pure else EXIT_VERDICT)


def cmd_cylinder(args, settings: ToolkitConfig) -> CommandResult:
    doc = load_document(args.input)
    cfg = decode_field(doc.field)
    x = endo_complex_of(doc)
    field_ = x.field
    model = homology_model(x)
    morphism = model.morphism
    cylinder = mapping_cylinder(morphism)
    projection = cylinder_projection(morphism, cylinder)
    quasi = is_n_quasi_iso(projection.f, cylinder.complex, x.complex).is_quasi_iso
    source, target = morphism.source, morphism.target
    identity = True
    for n in cylinder.complex.degrees:
        expected = poly_mul(field_, poly_mul(field_, char_poly(field_, source.phi(n - 1)), char_poly(field_, target.phi(n))),
                            char_poly(field_, source.phi(n)))
        if char_poly(field_, cylinder.phi(n)) != expected:
            identity = False
            break
    dims_cyl, dims_x = homology(cylinder.complex).dims, homology(x.complex).dims
    payload = {
        "projection_quasi_iso": quasi,
        "char_poly_identity": identity,
        "homology_dims": {str(n): d for n, d in sorted(dims_cyl.items()) if d},
        "target_homology_dims": {str(n): d for n, d in sorted(dims_x.items()) if d},
    }
    ok = quasi and identity
    lines = [
        f"{'✅' if quasi else '❌'} Cyl(f) -> X is a quasi-isomorphism",
        f"{'✅' if identity else '❌'} char poly of psi factors through the three summands",
    ]
    return CommandResult(payload=payload, lines=lines, status=EXIT_OK if ok else EXIT_VERDICT,
                         document=dump_document(encode_complex(cylinder, cfg, {"report": payload})))


def cmd_model(args, settings: ToolkitConfig) -> CommandResult:
    doc = load_document(args.input)
    if not isinstance(doc, DGADoc):
        raise InputError(f"model needs a dg-algebra, got a {doc.kind} document")
    a, endo = decode_dga(doc)
    cfg = decode_field(doc.field)
    if args.tate:
        if endo is None:
            raise InputError("--tate needs a dg-algebra with an endomorphism")
        bound = args.bound
        if bound is None:
            alpha = resolve_alpha(args, doc)
            bound = formality_degree(alpha, cfg.h)
        model = weighted_model_from_tate(a, endo, cfg, bound, settings.model)
    else:
        model = build_free_model(a, resolve_alpha(args, doc), args.bound, settings.model)
    payload = {
        "success": model.success,
        "generators": len(model.generators),
        "bound": model.bound,
        "degree_cap": model.degree_cap,
        "checks": model.checks,
        "error": model.error_message,
    }
    mark = "✅" if model.success else "❌"
    lines = [f"{mark} Free model with {len(model.generators)} generators, verified up to degree {model.bound}"]
    lines += [f"   {g.label}: degree {g.degree}, weight {g.weight}" for g in model.generators]
    return CommandResult(payload=payload, lines=lines, status=EXIT_OK if model.success else EXIT_VERDICT,
                         document=dump_document(encode_free_model(model)))


def _witness_for(args, doc, settings: ToolkitConfig):
    cfg = decode_field(doc.field)
    if isinstance(doc, DGADoc):
        a, endo = decode_dga(doc)
        alpha = resolve_alpha(args, doc)
        if args.tate and endo is None:
            raise InputError("--tate needs a dg-algebra with an endomorphism")
        report = FormalityPipeline(settings).run(
            a, alpha, phi=endo if args.tate else None, cfg=cfg, force_model=args.force_model,
        )
        if report.witness is None:
            raise VerdictError(report.error_message or "no witness", locus=report.failed_stage.value)
        return report.witness, cfg
    if isinstance(doc, FreeModelDoc):
        model = decode_free_model(doc)
        alpha = parse_alpha(args.alpha) if args.alpha is not None else model.alpha
        if alpha is None:
            raise InputError("--alpha is required for this model")
        return formality_witness(model, alpha), cfg
    if isinstance(doc, ComplexDoc) and doc.kind == "graded_complex":
        return graded_formality_witness(decode_complex(doc), resolve_alpha(args, doc)), cfg
    if isinstance(doc, ComplexDoc) and doc.kind == "endo_complex":
        return formality_zigzag_complex(decode_complex(doc), resolve_alpha(args, doc), cfg), cfg
    raise InputError(f"cannot build a witness from a {doc.kind} document")


def cmd_witness(args, settings: ToolkitConfig) -> CommandResult:
    doc = load_document(args.input)
    witness, cfg = _witness_for(args, doc, settings)
    payload = {
        "success": witness.success,
        "overall_N": witness.overall_N,
        "stages": {s.name: s.quasi_iso for s in witness.stages},
        "error": witness.error_message,
    }
    return CommandResult(payload=payload, lines=witness.summary().splitlines(),
                         status=EXIT_OK if witness.success else EXIT_VERDICT,
                         document=certificate_json(witness, cfg))


def cmd_zigzag(args, settings: ToolkitConfig) -> CommandResult:
    doc = load_document(args.input)
    if isinstance(doc, DGADoc):
        cfg = decode_field(doc.field)
        witness = formality_zigzag_complex(endo_complex_of(doc), resolve_alpha(args, doc), cfg)
    elif isinstance(doc, ComplexDoc) and doc.kind != "complex":
        args.tate, args.force_model = False, False
        witness, cfg = _witness_for(args, doc, settings)
    else:
        raise InputError("zigzag needs a graded complex, a complex with endomorphism or a dg-algebra with one")
    payload = {"success": witness.success, "overall_N": witness.overall_N, "error": witness.error_message}
    return CommandResult(payload=payload, lines=witness.summary().splitlines(),
                         status=EXIT_OK if witness.success else EXIT_VERDICT,
                         document=certificate_json(witness, cfg))


def cmd_verify(args, settings: ToolkitConfig) -> CommandResult:
    doc = load_document(args.input)
    if not isinstance(doc, CertificateDoc):
        raise InputError(f"verify needs a certificate, got a {doc.kind} document")
    report = verify_certificate(doc)
    payload = {
        "verified": report.success,
        "failed_stage": report.failed_stage,
        "failures": report.failures,
        "stages": report.stages,
        "checks": report.checks,
        "composite_identity": report.composite_identity,
        "overall_N": report.overall_N,
        "unverified": report.unverified,
    }
    if report.success:
        lines = [f"✅ Certificate verified: {len(report.stages)} stages, N = {report.overall_N}"]
    else:
        lines = [f"❌ {report.error_message}"]
    return CommandResult(payload=payload, lines=lines, status=EXIT_OK if report.success else EXIT_VERDICT)


def _parse_class(token: str):
    token = token.strip()
    return int(token) if token.lstrip("-").isdigit() else token


def cmd_massey(args, settings: ToolkitConfig) -> CommandResult:
    if args.predicate:
        if args.alpha is None or args.k is None:
            raise InputError("--predicate needs --alpha and --k")
        modulus = None if args.modulus is None else int(args.modulus)
        verdict = vanishing_predicate(args.alpha, modulus, args.k)
        payload = {"k": args.k, "alpha": args.alpha, "modulus": modulus, "predicate": verdict.value}
        return CommandResult(payload=payload, lines=[f"k = {args.k}: {verdict.value}"])
    if args.input is None or args.classes is None:
        raise InputError("massey needs an input and --classes")
    doc = load_document(args.input)
    if not isinstance(doc, DGADoc):
        raise InputError(f"massey needs a dg-algebra, got a {doc.kind} document")
    a, _ = decode_dga(doc)
    result = k_massey(a, [_parse_class(c) for c in args.classes.split(",")], settings=settings.massey)
    field_ = a.field
    payload = {
        "defined": result.defined,
        "order": result.order,
        "degree": result.degree,
        "weight": result.weight,
        "contains_zero": result.contains_zero,
        "search_exhausted": result.search_exhausted,
        "systems_explored": result.systems_explored,
        "representative": None if result.representative is None
        else [field_.format(v) for v in np.ravel(result.representative).tolist()],
        "error": result.error_message,
    }
    vanishing_fails = result.defined and result.contains_zero is False
    if not result.defined:
        lines = [f"➖ Massey product not defined: {result.error_message}"]
    elif result.contains_zero:
        lines = [f"✅ Massey product of order {result.order} contains zero"]
    elif result.contains_zero is None:
        lines = [f"⚠️ Inconclusive after {result.systems_explored} defining systems"]
    else:
        lines = [f"❌ Massey product of order {result.order} does not contain zero"]
    return CommandResult(payload=payload, lines=lines, status=EXIT_VERDICT if vanishing_fails else EXIT_OK)


def cmd_report(args, settings: ToolkitConfig) -> CommandResult:
    doc = load_document(args.input)
    if not isinstance(doc, DGADoc):
        raise InputError(f"report needs a dg-algebra, got a {doc.kind} document")
    a, endo = decode_dga(doc)
    cfg = decode_field(doc.field)
    if args.tate and endo is None:
        raise InputError("--tate needs a dg-algebra with an endomorphism")
    report = FormalityPipeline(settings).run(
        a, resolve_alpha(args, doc), phi=endo if args.tate else None, cfg=cfg,
        force_model=args.force_model, max_k=args.max_k,
    )
    payload = {
        "success": report.success,
        "alpha": str(report.alpha),
        "modulus": report.modulus,
        "N": report.N,
        "betti": {str(n): d for n, d in sorted(report.betti.items())},
        "connectivity": None if report.connectivity is None else report.connectivity.r,
        "simply_connected": None if report.connectivity is None else report.connectivity.simply_connected,
        "pure": None if report.purity is None else report.purity.is_pure,
        "massey": {str(k): v for k, v in report.massey.items()},
        "massey_free_degree": report.massey_free_degree,
        "witness": None if report.witness is None else report.witness.success,
        "failed_stage": None if report.failed_stage is None else report.failed_stage.value,
        "error": report.error_message,
    }
    lines = [
        f"alpha = {report.alpha}, modulus = {report.modulus if report.modulus is not None else 'Z'}, "
        f"N = {report.N if report.N is not None else 'all'}",
        f"Betti numbers: {report.betti}",
    ]
    lines += [f"   {k}-fold Massey products: {v}" for k, v in report.massey.items()]
    if report.massey_free_degree is not None:
        lines.append(f"   no Massey products in degrees <= {report.massey_free_degree}")
    lines.append(f"{'✅' if report.success else '❌'} {report.error_message or 'witness verified'}")
    return CommandResult(payload=payload, lines=lines, status=EXIT_OK if report.success else EXIT_VERDICT)


COMMANDS = {
    "gen": cmd_gen,
    "validate": cmd_validate,
    "grade": cmd_grade,
    "purity": cmd_purity,
    "cylinder": cmd_cylinder,
    "model": cmd_model,
    "witness": cmd_witness,
    "zigzag": cmd_zigzag,
    "verify": cmd_verify,
    "massey": cmd_massey,
    "report": cmd_report,
}


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formality",
        description="Exact purity and formality checks for weighted complexes and dg-algebras.",
    )
    parser.add_argument("--format", choices=["json", "text"], default=None,
                        help="Report format (default: configuration output_format)")
    parser.add_argument("--config", type=Path, default=None, help="Configuration JSON file")
    parser.add_argument("--log-level", default=None, help="Logging level (default: configuration log_level)")
    parser.add_argument("-o", "--output", default=None, help="Write the document or report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p: argparse.ArgumentParser, required: bool = True):
        if required:
            p.add_argument("input", nargs="?", default="-", help="Input document path, or - for stdin")
        else:
            p.add_argument("input", nargs="?", default=None, help="Input document path, or - for stdin")

    gen = sub.add_parser("gen", help="Generate a built-in input")
    gen.add_argument("--kind", required=True,
                     choices=["projective", "gm", "configuration", "random_pure", "random_pure_dga", "random_tate"])
    gen.add_argument("--n", type=int, default=2, help="Dimension of P^n")
    gen.add_argument("--points", type=int, default=3, help="Points of the configuration space")
    gen.add_argument("--d", type=int, default=1, help="Configuration space of C^d")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--alpha", default=None, help="Slope a/b for random pure kinds")
    gen.add_argument("--modulus", type=int, default=None, help="Weight modulus for random pure kinds")
    gen.add_argument("--normalization", choices=["tate", "weil"], default="tate")
    gen.add_argument("--contaminate", action="store_true", help="Plant a non-Tate block")
    gen.add_argument("--l", type=int, default=None, help="Field characteristic (0 for Q)")
    gen.add_argument("--q", type=int, default=None, help="Frobenius eigenbase")

    with_input(sub.add_parser("validate", help="Validate a document"))
    with_input(sub.add_parser("grade", help="Tate or Weil grading of a complex with endomorphism"))

    purity = sub.add_parser("purity", help="Check alpha-purity")
    with_input(purity)
    purity.add_argument("--alpha", default=None)
    purity.add_argument("--tate", action="store_true", help="Read weights off the endomorphism")

    with_input(sub.add_parser("cylinder", help="Mapping cylinder of the homology model"))

    model = sub.add_parser("model", help="Build a free model of a dg-algebra")
    with_input(model)
    model.add_argument("--alpha", default=None)
    model.add_argument("--bound", type=int, default=None, help="Verify the model up to this degree")
    model.add_argument("--tate", action="store_true", help="Weights from the endomorphism")

    for name, help_text in (("witness", "Emit a formality certificate"), ("zigzag", "Complex zig-zag certificate")):
        p = sub.add_parser(name, help=help_text)
        with_input(p)
        p.add_argument("--alpha", default=None)
        if name == "witness":
            p.add_argument("--tate", action="store_true", help="Weights from the endomorphism")
            p.add_argument("--force-model", action="store_true", help="Build a free model even when d = 0")

    with_input(sub.add_parser("verify", help="Re-verify a certificate from scratch"))

    massey = sub.add_parser("massey", help="Massey products and vanishing predicates")
    with_input(massey, required=False)
    massey.add_argument("--classes", default=None, help="Comma separated cohomology labels or indices")
    massey.add_argument("--predicate", action="store_true", help="Only evaluate the vanishing predicate")
    massey.add_argument("--alpha", default=None)
    massey.add_argument("--modulus", default=None)
    massey.add_argument("--k", type=int, default=None)

    report = sub.add_parser("report", help="Pipeline report for a dg-algebra")
    with_input(report)
    report.add_argument("--alpha", default=None)
    report.add_argument("--tate", action="store_true")
    report.add_argument("--force-model", action="store_true")
    report.add_argument("--max-k", type=int, default=5)
    return parser


# -- entry points ------------------------------------------------------------------------------

def _emit(text: str, output: Optional[str]):
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK

    try:
        settings = load_config(args.config)
    except (ValidationError, ValueError) as e:
        sys.stderr.write(f"error: invalid configuration {args.config}: {e}\n")
        return EXIT_INPUT
    logging.basicConfig(
        level=getattr(logging, (args.log_level or settings.log_level).upper(), logging.INFO),
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    output_format = args.format or settings.output_format

    try:
        result = COMMANDS[args.command](args, settings)
    except (InputError, ValidationError, ValueError) as e:
        if isinstance(e, ValidationError):
            e = _schema_error(e)
        logger.error(f"❌ {e}")
        error = {"error": str(e), "status": EXIT_INPUT}
        if isinstance(e, SchemaError):
            error["pointer"] = e.pointer
        if output_format == "json":
            _emit(json.dumps(error, indent=2, sort_keys=True, default=str), None)
        return EXIT_INPUT
    except VerdictError as e:
        logger.info(f"❌ {e}")
        locus = e.locus if isinstance(e.locus, (int, str, type(None))) else list(e.locus)
        error = {"error": str(e), "locus": locus, "status": EXIT_VERDICT}
        if output_format == "json":
            _emit(json.dumps(error, indent=2, sort_keys=True, default=str), None)
        else:
            _emit(f"❌ {e}", None)
        return EXIT_VERDICT

    if output_format == "json":
        text = result.document or json.dumps(dict(result.payload, status=result.status), indent=2, sort_keys=True, default=str)
    else:
        text = "\n".join(result.lines)
    _emit(text, args.output)
    return result.status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
