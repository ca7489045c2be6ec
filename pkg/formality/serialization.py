"""
JSON Documents

Versioned ("schema": 1) pydantic documents for every object the toolkit
reads or writes: matrices, complexes (plain, with endomorphism, graded),
weighted dg-algebras, free models and formality certificates. Parsing
errors carry JSON-pointer locations into the offending document.
"""

import json
import logging
from fractions import Fraction
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from .complexes import Complex, EndoComplex, GradedMap, Variance
from .config import FieldConfig
from .dga import BasisElement, WeightedDGA, parse_word
from .errors import InputError, SchemaError
from .field_linalg import Field as ExactField, Matrix
from .free_models import FreeModel, Generator, _materialize, verify_model
from .weights import GradedComplex, WeightGrading, parse_alpha
from .witness import Direction, FormalityWitness, StageKind, WitnessStage

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
Entry = Union[int, str]
KIND_TAGS = ("dga", "complex", "endo_complex", "graded_complex", "free_model", "certificate")


def json_pointer(loc: Tuple) -> str:
    """JSON pointer for a pydantic error location; union tags are dropped."""
    parts = []
    for part in loc:
        if isinstance(part, str) and (part in KIND_TAGS or "[" in part):
            continue
        parts.append(str(part).replace("~", "~0").replace("/", "~1"))
    return "/" + "/".join(parts) if parts else ""


def _schema_error(error: ValidationError) -> SchemaError:
    first = error.errors()[0]
    return SchemaError(first["msg"], json_pointer(tuple(first["loc"])))


# -- documents --------------------------------------------------------------------

class Document(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_version: Literal[1] = Field(default=SCHEMA_VERSION, alias="schema")


class MatrixDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    entries: List[List[Entry]]

    @model_validator(mode="after")
    def _check_shape(self):
        if len(self.entries) != self.rows:
            raise ValueError(f"expected {self.rows} rows, got {len(self.entries)}")
        for i, row in enumerate(self.entries):
            if len(row) != self.cols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {self.cols}")
        return self


class FieldDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    characteristic: int
    q: int = 2


class BasisDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str
    deg: int
    weight: int


class DGADoc(Document):
    """Weighted dg-algebra; mult lists (i, j, coefficients of e_i e_j) for non-zero products."""
    kind: Literal["dga"] = "dga"
    field: FieldDoc
    modulus: Optional[int] = None
    basis: List[BasisDoc]
    unit: Optional[int] = None
    mult: List[Tuple[int, int, List[Entry]]] = Field(default_factory=list)
    diff: MatrixDoc
    degree_cap: Optional[int] = None
    endo: Optional[MatrixDoc] = None
    meta: Dict[str, Any] = Field(default_factory=dict)


class WeightPieceDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: int
    basis: MatrixDoc


class ComplexDoc(Document):
    """Complex; endo_complex adds phi, graded_complex adds a weight splitting."""
    kind: Literal["complex", "endo_complex", "graded_complex"] = "complex"
    field: FieldDoc
    variance: Literal["homological", "cohomological"] = "homological"
    dims: Dict[str, int]
    diff: Dict[str, MatrixDoc] = Field(default_factory=dict)
    endo: Optional[Dict[str, MatrixDoc]] = None
    modulus: Optional[int] = None
    weights: Optional[Dict[str, List[WeightPieceDoc]]] = None
    meta: Dict[str, Any] = Field(default_factory=dict)


class MonomialDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    coefficient: Entry
    word: List[str]


class GeneratorDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str
    deg: int
    weight: int
    diff_on_gens: List[MonomialDoc] = Field(default_factory=list)
    image: List[Entry]
    endo: Optional[List[MonomialDoc]] = None
    homotopy: Optional[List[Entry]] = None


class FreeModelDoc(Document):
    kind: Literal["free_model"] = "free_model"
    field: FieldDoc
    modulus: Optional[int] = None
    alpha: Optional[str] = None
    bound: int
    degree_cap: int
    generators: List[GeneratorDoc]
    target: DGADoc
    map_to_target: MatrixDoc
    endo: Optional[MatrixDoc] = None
    homotopy: Optional[MatrixDoc] = None
    target_endo: Optional[MatrixDoc] = None
    meta: Dict[str, Any] = Field(default_factory=dict)


ObjectDoc = Annotated[Union[DGADoc, ComplexDoc], Field(discriminator="kind")]
MapDoc = Union[MatrixDoc, Dict[str, MatrixDoc]]


class StageDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    source: str
    target: str
    direction: Literal["forward", "backward"]
    kind: Literal["chain", "ho", "dga"]
    maps: MapDoc
    homotopy: Optional[MapDoc] = None
    quasi_iso: bool
    verified_N: Optional[int] = None
    options: Dict[str, Any] = Field(default_factory=dict)


class CertificateDoc(Document):
    kind: Literal["certificate"] = "certificate"
    field: FieldDoc
    alpha: str
    modulus: Optional[int] = None
    overall_N: Optional[int] = None
    objects: Dict[str, ObjectDoc]
    stages: List[StageDoc]
    endomorphisms: Dict[str, MatrixDoc] = Field(default_factory=dict)
    checks: Dict[str, bool] = Field(default_factory=dict)
    composite_identity: bool
    success: bool
    error_message: Optional[str] = None


AnyDocument = Annotated[
    Union[DGADoc, ComplexDoc, FreeModelDoc, CertificateDoc], Field(discriminator="kind")
]
_document_adapter = TypeAdapter(AnyDocument)


def parse_document(text: str):
    """Validate a JSON document of any kind; errors become SchemaError with a pointer."""
    try:
        return _document_adapter.validate_json(text)
    except ValidationError as e:
        raise _schema_error(e) from None


def dump_document(doc: BaseModel) -> str:
    """Deterministic JSON: aliases, sorted keys, two-space indent."""
    payload = json.loads(doc.model_dump_json(by_alias=True))
    return json.dumps(payload, indent=2, sort_keys=True)


# -- encoding -----------------------------------------------------------------------

def encode_field(cfg: FieldConfig) -> FieldDoc:
    return FieldDoc(characteristic=cfg.characteristic, q=cfg.q)


def encode_matrix(field: ExactField, m: Matrix) -> MatrixDoc:
    rows, cols = m.shape
    return MatrixDoc(rows=rows, cols=cols, entries=[[field.format(v) for v in row] for row in m.tolist()])


def encode_vector(field: ExactField, v: Matrix) -> List[Entry]:
    return [field.format(x) for x in np.asarray(v).tolist()]


def encode_graded_map(field: ExactField, maps: GradedMap) -> Dict[str, MatrixDoc]:
    return {str(n): encode_matrix(field, m) for n, m in sorted(maps.items())}


def encode_dga(a: WeightedDGA, endo: Optional[Matrix] = None, meta: Optional[Dict[str, Any]] = None) -> DGADoc:
    field = a.field
    mult = []
    for i in range(a.dim):
        for j in range(a.dim):
            column = a.mult[i, j]
            if np.any(column != 0):
                mult.append((i, j, encode_vector(field, column)))
    return DGADoc(
        field=encode_field(a.field_config),
        modulus=a.modulus,
        basis=[BasisDoc(label=b.label, deg=b.degree, weight=b.weight) for b in a.basis],
        unit=a.unit,
        mult=mult,
        diff=encode_matrix(field, a.diff),
        degree_cap=a.degree_cap,
        endo=None if endo is None else encode_matrix(field, endo),
        meta=meta or {},
    )


def encode_complex(x: Union[Complex, EndoComplex, GradedComplex], cfg: FieldConfig,
                   meta: Optional[Dict[str, Any]] = None) -> ComplexDoc:
    doc = ComplexDoc(field=encode_field(cfg), dims={}, meta=meta or {})
    if isinstance(x, GradedComplex):
        c = x.complex
        doc.kind = "graded_complex"
        doc.modulus = x.modulus
        doc.weights = {
            str(n): [WeightPieceDoc(p=p, basis=encode_matrix(c.field, basis)) for p, basis in pieces]
            for n, pieces in sorted(x.grading.splitting.items())
        }
    elif isinstance(x, EndoComplex):
        c = x.complex
        doc.kind = "endo_complex"
        doc.endo = encode_graded_map(c.field, x.endo)
    else:
        c = x
    doc.variance = c.variance.value
    doc.dims = {str(n): d for n, d in sorted(c.dims.items())}
    doc.diff = encode_graded_map(c.field, c.diff)
    return doc


def _monomials(field: ExactField, words) -> List[MonomialDoc]:
    return [MonomialDoc(coefficient=field.format(c), word=list(w)) for w, c in sorted(words.items())]


def encode_free_model(model: FreeModel, meta: Optional[Dict[str, Any]] = None) -> FreeModelDoc:
    field = model.algebra.field
    generators = [
        GeneratorDoc(
            label=g.label, deg=g.degree, weight=g.weight,
            diff_on_gens=_monomials(field, g.differential),
            image=encode_vector(field, g.image),
            endo=None if g.endo is None else _monomials(field, g.endo),
            homotopy=None if g.homotopy is None else encode_vector(field, g.homotopy),
        )
        for g in model.generators
    ]
    optional = {
        name: None if value is None else encode_matrix(field, value)
        for name, value in (("endo", model.endo), ("homotopy", model.homotopy), ("target_endo", model.target_endo))
    }
    cfg = model.algebra.field_config
    if model.q is not None:
        cfg = FieldConfig(characteristic=cfg.characteristic, q=model.q)
    return FreeModelDoc(
        field=encode_field(cfg),
        modulus=model.modulus,
        alpha=None if model.alpha is None else str(model.alpha),
        bound=model.bound,
        degree_cap=model.degree_cap,
        generators=generators,
        target=encode_dga(model.target),
        map_to_target=encode_matrix(field, model.map),
        meta=meta or {},
        **optional,
    )


def _encode_object(obj, cfg: FieldConfig):
    if isinstance(obj, WeightedDGA):
        return encode_dga(obj)
    return encode_complex(obj, cfg)


def _encode_map(field: ExactField, maps) -> Optional[MapDoc]:
    if maps is None:
        return None
    if isinstance(maps, dict):
        return encode_graded_map(field, maps)
    return encode_matrix(field, maps)


def encode_witness(witness: FormalityWitness, cfg: FieldConfig) -> CertificateDoc:
    """Certificate embedding every object and stage map of a witness."""
    field = cfg.field
    return CertificateDoc(
        field=encode_field(cfg),
        alpha=str(witness.alpha),
        modulus=witness.modulus,
        overall_N=witness.overall_N,
        objects={name: _encode_object(obj, cfg) for name, obj in witness.objects.items()},
        stages=[
            StageDoc(
                name=s.name, source=s.source, target=s.target, direction=s.direction.value, kind=s.kind.value,
                maps=_encode_map(field, s.maps), homotopy=_encode_map(field, s.homotopy),
                quasi_iso=s.quasi_iso, verified_N=s.verified_N, options=dict(s.options),
            )
            for s in witness.stages
        ],
        endomorphisms={name: encode_matrix(field, m) for name, m in witness.endomorphisms.items()},
        checks=dict(witness.checks),
        composite_identity=witness.composite_identity,
        success=witness.success,
        error_message=witness.error_message,
    )


# -- decoding -------------------------------------------------------------------------

def decode_field(doc: FieldDoc, pointer: str = "/field") -> FieldConfig:
    try:
        return FieldConfig(characteristic=doc.characteristic, q=doc.q)
    except (ValidationError, ValueError) as e:
        raise SchemaError(str(e).splitlines()[-1].strip(), pointer) from None


def decode_matrix(field: ExactField, doc: MatrixDoc, pointer: str) -> Matrix:
    try:
        return field.matrix(doc.entries, doc.rows, doc.cols)
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"bad matrix entry: {e}", pointer + "/entries") from None


def decode_vector(field: ExactField, entries: List[Entry], dim: int, pointer: str) -> Matrix:
    if len(entries) != dim:
        raise SchemaError(f"expected {dim} entries, got {len(entries)}", pointer)
    try:
        return field.vector(entries) if dim else np.zeros(0, dtype=field.dtype)
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"bad entry: {e}", pointer) from None


def decode_graded_map(field: ExactField, maps: Dict[str, MatrixDoc], pointer: str) -> GradedMap:
    out: GradedMap = {}
    for key, m in maps.items():
        try:
            n = int(key)
        except ValueError:
            raise SchemaError(f"degree key {key!r} is not an integer", f"{pointer}/{key}") from None
        out[n] = decode_matrix(field, m, f"{pointer}/{key}")
    return out


def decode_dga(doc: DGADoc, pointer: str = "") -> Tuple[WeightedDGA, Optional[Matrix]]:
    """(algebra, endomorphism or None)."""
    cfg = decode_field(doc.field, pointer + "/field")
    field = cfg.field
    dim = len(doc.basis)
    mult = np.zeros((dim, dim, dim), dtype=field.dtype)
    for t, (i, j, coefficients) in enumerate(doc.mult):
        where = f"{pointer}/mult/{t}"
        if not (0 <= i < dim and 0 <= j < dim):
            raise SchemaError(f"basis pair ({i}, {j}) out of range", where)
        mult[i, j] = decode_vector(field, coefficients, dim, where + "/2")
    diff = decode_matrix(field, doc.diff, pointer + "/diff")
    if diff.shape != (dim, dim):
        raise SchemaError(f"differential has shape {diff.shape}, expected {(dim, dim)}", pointer + "/diff")
    try:
        a = WeightedDGA(
            field_config=cfg,
            modulus=doc.modulus,
            basis=[BasisElement(b.label, b.deg, b.weight) for b in doc.basis],
            mult=mult,
            diff=diff,
            unit=doc.unit,
            degree_cap=doc.degree_cap,
        )
    except InputError as e:
        raise SchemaError(str(e), pointer or "/") from None
    endo = None if doc.endo is None else decode_matrix(field, doc.endo, pointer + "/endo")
    if endo is not None and endo.shape != (dim, dim):
        raise SchemaError(f"endomorphism has shape {endo.shape}, expected {(dim, dim)}", pointer + "/endo")
    return a, endo


def decode_complex(doc: ComplexDoc, pointer: str = "") -> Union[Complex, EndoComplex, GradedComplex]:
    cfg = decode_field(doc.field, pointer + "/field")
    field = cfg.field
    try:
        dims = {int(n): d for n, d in doc.dims.items()}
    except ValueError:
        raise SchemaError("degree keys must be integers", pointer + "/dims") from None
    diff = decode_graded_map(field, doc.diff, pointer + "/diff")
    try:
        c = Complex(field=field, dims=dims, diff=diff, variance=Variance(doc.variance))
        if doc.kind == "endo_complex":
            return EndoComplex(c, decode_graded_map(field, doc.endo or {}, pointer + "/endo"))
        if doc.kind == "graded_complex":
            splitting = {
                int(n): [
                    (piece.p, decode_matrix(field, piece.basis, f"{pointer}/weights/{n}/{t}/basis"))
                    for t, piece in enumerate(pieces)
                ]
                for n, pieces in (doc.weights or {}).items()
            }
            return GradedComplex(c, WeightGrading(doc.modulus, splitting))
    except InputError as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError(str(e), pointer or "/") from None
    return c


def decode_free_model(doc: FreeModelDoc, pointer: str = "") -> FreeModel:
    """Rebuild M from its generators and re-run every model check."""
    cfg = decode_field(doc.field, pointer + "/field")
    field = cfg.field
    target, target_endo = decode_dga(doc.target, pointer + "/target")
    generators = []
    for t, g in enumerate(doc.generators):
        where = f"{pointer}/generators/{t}"
        differential = {parse_word(m.word): field.element(m.coefficient) for m in g.diff_on_gens}
        endo = None if g.endo is None else {parse_word(m.word): field.element(m.coefficient) for m in g.endo}
        generators.append(Generator(
            label=g.label, degree=g.deg, weight=g.weight, differential=differential,
            image=decode_vector(field, g.image, target.dim, where + "/image"),
            endo=endo,
            homotopy=None if g.homotopy is None else decode_vector(field, g.homotopy, target.dim, where + "/homotopy"),
        ))
    try:
        m = _materialize(target.field_config, generators, doc.degree_cap, doc.modulus)
    except InputError as e:
        raise SchemaError(str(e), pointer + "/generators") from None
    matrices = {}
    for name in ("map_to_target", "endo", "homotopy", "target_endo"):
        value = getattr(doc, name)
        matrices[name] = None if value is None else decode_matrix(field, value, f"{pointer}/{name}")
    fmat = matrices["map_to_target"]
    if fmat.shape != (target.dim, m.dim):
        raise SchemaError(f"map has shape {fmat.shape}, expected {(target.dim, m.dim)}", pointer + "/map_to_target")
    model = FreeModel(
        generators=generators, algebra=m, target=target, map=fmat, bound=doc.bound,
        degree_cap=doc.degree_cap, alpha=None if doc.alpha is None else parse_alpha(doc.alpha),
        endo=matrices["endo"], homotopy=matrices["homotopy"],
        target_endo=matrices["target_endo"] if matrices["target_endo"] is not None else target_endo,
        q=cfg.q if matrices["endo"] is not None else None,
    )
    if model.endo is not None and (model.homotopy is None or model.target_endo is None):
        raise SchemaError("a Tate model needs endo, homotopy and target_endo", pointer or "/")
    return verify_model(model)


def decode_object(doc: Union[DGADoc, ComplexDoc], pointer: str):
    if isinstance(doc, DGADoc):
        return decode_dga(doc, pointer)[0]
    return decode_complex(doc, pointer)


def decode_map(field: ExactField, doc: Optional[MapDoc], pointer: str):
    if doc is None:
        return None
    if isinstance(doc, MatrixDoc):
        return decode_matrix(field, doc, pointer)
    return decode_graded_map(field, doc, pointer)


def decode_witness(doc: CertificateDoc) -> Tuple[FormalityWitness, FieldConfig]:
    """Rebuild a witness from a certificate exactly as stored (flags included)."""
    cfg = decode_field(doc.field)
    field = cfg.field
    try:
        alpha = parse_alpha(doc.alpha)
    except InputError as e:
        raise SchemaError(str(e), "/alpha") from None
    witness = FormalityWitness(
        alpha=alpha, modulus=doc.modulus, overall_N=doc.overall_N,
        composite_identity=doc.composite_identity, checks=dict(doc.checks),
        success=doc.success, error_message=doc.error_message,
    )
    witness.objects = {name: decode_object(obj, f"/objects/{name}") for name, obj in doc.objects.items()}
    witness.endomorphisms = {
        name: decode_matrix(field, m, f"/endomorphisms/{name}") for name, m in doc.endomorphisms.items()
    }
    for t, s in enumerate(doc.stages):
        where = f"/stages/{t}"
        for end in (s.source, s.target):
            if end not in witness.objects:
                raise SchemaError(f"stage {s.name} refers to unknown object {end!r}", where)
        witness.stages.append(WitnessStage(
            name=s.name, source=s.source, target=s.target, direction=Direction(s.direction),
            kind=StageKind(s.kind), maps=decode_map(field, s.maps, where + "/maps"),
            homotopy=decode_map(field, s.homotopy, where + "/homotopy"),
            quasi_iso=s.quasi_iso, verified_N=s.verified_N, options=dict(s.options),
        ))
    return witness, cfg


def alpha_hint(doc) -> Optional[Fraction]:
    """The alpha a generated document advertises in its metadata, if any."""
    value = getattr(doc, "meta", {}).get("alpha")
    return None if value is None else parse_alpha(value)
