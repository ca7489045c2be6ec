"""
Weighted DG-Algebras

Finite-dimensional associative dg-algebras with a homogeneous basis
carrying (degree, weight mod m), structure constants mult[i, j, k]
(coefficient of e_k in e_i e_j) and a cohomological differential d.
Provides validation, cohomology algebras, connectivity, Massey products
through weight-homogeneous defining systems, and the arithmetic
vanishing predicates for pure algebras.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .complexes import (
    Complex,
    EndoComplex,
    QuasiIsoReport,
    Variance,
    degree_homology,
    is_n_quasi_iso,
    koszul_sign,
)
from .config import FieldConfig, MasseyConfig, config
from .errors import InputError
from .field_linalg import Field, Matrix, equal, image_basis, inverse, is_zero, rank, solve_matrix
from .weights import PurityReport, on_diagonal, parse_alpha

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]
UNIT_LABEL = "1"
WORD_SEPARATOR = "*"


@dataclass(frozen=True)
class BasisElement:
    label: str
    degree: int
    weight: int


@dataclass
class WeightedDGA:
    """Associative dg-algebra with a homogeneous basis; modulus None means integer weights."""
    field_config: FieldConfig
    modulus: Optional[int]
    basis: List[BasisElement]
    mult: np.ndarray
    diff: Matrix
    unit: Optional[int]
    degree_cap: Optional[int] = None  # products above this degree were truncated

    def __post_init__(self):
        field = self.field
        dim = len(self.basis)
        if self.modulus is not None and self.modulus < 1:
            raise InputError(f"modulus must be positive, got {self.modulus}")
        self.basis = [
            BasisElement(b.label, int(b.degree), self.normalize(b.weight)) for b in self.basis
        ]
        self.mult = field.reduce(np.asarray(self.mult, dtype=field.dtype).reshape(dim, dim, dim))
        self.diff = field.reduce(np.asarray(self.diff, dtype=field.dtype).reshape(dim, dim))
        if self.unit is None and dim:
            raise InputError("a non-zero algebra needs a unit")
        if self.unit is not None and not 0 <= self.unit < dim:
            raise InputError(f"unit index {self.unit} out of range")
        labels = [b.label for b in self.basis]
        if len(set(labels)) != len(labels):
            raise InputError("basis labels must be distinct")
        self._pieces: Dict[Tuple[int, int], List[int]] = {}
        for i, b in enumerate(self.basis):
            self._pieces.setdefault((b.degree, b.weight), []).append(i)

    @property
    def field(self) -> Field:
        return self.field_config.field

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def degrees(self) -> List[int]:
        return sorted({b.degree for b in self.basis})

    @property
    def top_degree(self) -> int:
        return max((b.degree for b in self.basis), default=0)

    def normalize(self, p: int) -> int:
        return int(p) if self.modulus is None else int(p) % self.modulus

    def index(self, label: str) -> int:
        for i, b in enumerate(self.basis):
            if b.label == label:
                return i
        raise InputError(f"no basis element labelled {label!r}")

    def degree_indices(self, n: int) -> List[int]:
        return [i for i, b in enumerate(self.basis) if b.degree == n]

    def piece_indices(self, n: int, p: int) -> List[int]:
        return self._pieces.get((n, self.normalize(p)), [])

    def pieces(self) -> Dict[Tuple[int, int], List[int]]:
        return dict(self._pieces)

    def vector(self, coefficients: Dict[str, Union[int, str]]) -> Matrix:
        v = np.zeros(self.dim, dtype=self.field.dtype)
        for label, value in coefficients.items():
            v[self.index(label)] = self.field.element(value)
        return self.field.reduce(v)

    def basis_vector(self, i: int) -> Matrix:
        v = np.zeros(self.dim, dtype=self.field.dtype)
        v[i] = 1
        return v

    def product(self, x: Matrix, y: Matrix) -> Matrix:
        if not self.dim:
            return np.zeros(0, dtype=self.field.dtype)
        partial = np.tensordot(x, self.mult, axes=([0], [0]))
        return self.field.reduce(np.tensordot(y, partial, axes=([0], [0])))

    def d(self, x: Matrix) -> Matrix:
        return self.field.mul(self.diff, x)

    def homogeneous_type(self, x: Matrix) -> Optional[Tuple[int, int]]:
        """(degree, weight) of a non-zero homogeneous vector, None if zero or mixed."""
        support = {(self.basis[i].degree, self.basis[i].weight) for i in np.flatnonzero(x != 0)}
        return support.pop() if len(support) == 1 else None

    def as_complex(self) -> Complex:
        """Underlying cochain complex, coordinates ordered by basis index within each degree."""
        dims = {n: len(self.degree_indices(n)) for n in self.degrees}
        diff = {}
        for n in self.degrees:
            rows, cols = self.degree_indices(n + 1), self.degree_indices(n)
            diff[n] = self.diff[np.ix_(rows, cols)] if rows else self.field.zeros(0, len(cols))
        return Complex(field=self.field, dims=dims, diff=diff, variance=Variance.COHOMOLOGICAL)

    def dual_endo_complex(self, phi: Matrix) -> EndoComplex:
        """Linear dual as a chain complex: C_n = (A^n)^*, d_n = (d^{n-1})^T, endomorphism phi^T.

        Degrees and eigenvalues are unchanged, so the dual is pure exactly when A is.
        """
        field = self.field
        if phi.shape != (self.dim, self.dim):
            raise InputError(f"phi has shape {phi.shape}, expected {(self.dim, self.dim)}")
        dims = {n: len(self.degree_indices(n)) for n in self.degrees}
        diff, endo = {}, {}
        for n in self.degrees:
            rows, cols = self.degree_indices(n), self.degree_indices(n - 1)
            diff[n] = self.diff[np.ix_(rows, cols)].T if cols else field.zeros(0, len(rows))
            endo[n] = phi[np.ix_(rows, rows)].T
        return EndoComplex(Complex(field=field, dims=dims, diff=diff, variance=Variance.HOMOLOGICAL), endo)


# -- validation ---------------------------------------------------------------

@dataclass
class Violation:
    kind: str
    locus: Tuple
    message: str


@dataclass
class DGAReport:
    """Outcome of validate(); violations are located on basis pairs and triples."""
    valid: bool
    violations: List[Violation] = dataclass_field(default_factory=list)

    @property
    def error_message(self) -> Optional[str]:
        if self.valid:
            return None
        first = self.violations[0]
        return f"{first.kind} at {first.locus}: {first.message}"


def _first_nonzero(array: np.ndarray, limit: int = 3) -> List[Tuple[int, ...]]:
    return [tuple(int(i) for i in idx) for idx in np.argwhere(array != 0)[:limit]]


def validate(a: WeightedDGA, max_violations: int = 20) -> DGAReport:
    """Check unit, degree/weight compatibility, d^2 = 0, Leibniz and associativity exactly."""
    field = a.field
    dim = a.dim
    violations: List[Violation] = []
    labels = [b.label for b in a.basis]

    def report(kind: str, loci: Iterable[Tuple[int, ...]], message: str):
        for locus in loci:
            if len(violations) < max_violations:
                violations.append(Violation(kind, tuple(labels[i] for i in locus), message))

    if dim == 0:
        return DGAReport(True)

    u = a.unit
    unit_element = a.basis[u]
    if unit_element.degree != 0 or unit_element.weight != 0:
        report("unit", [(u,)], "unit must have degree 0 and weight 0")
    identity = field.identity(dim)
    left_unit = [i for i in range(dim) if not equal(a.mult[u, i], identity[i])]
    right_unit = [i for i in range(dim) if not equal(a.mult[i, u], identity[i])]
    report("unit", [(i,) for i in left_unit[:3]], "1 * x != x")
    report("unit", [(i,) for i in right_unit[:3]], "x * 1 != x")

    degrees = np.array([b.degree for b in a.basis])
    weights = [b.weight for b in a.basis]
    for (target, source) in _first_nonzero(a.diff, limit=dim * dim):
        if degrees[target] != degrees[source] + 1 or weights[target] != weights[source]:
            report("differential", [(source, target)], "d must raise degree by one and preserve weight")
    for (i, j, k) in _first_nonzero(a.mult, limit=dim ** 3):
        if degrees[k] != degrees[i] + degrees[j] or weights[k] != a.normalize(weights[i] + weights[j]):
            report("product", [(i, j, k)], "product breaks degree or weight additivity")

    report("d^2", [(j,) for (_, j) in _first_nonzero(field.mul(a.diff, a.diff))], "d o d != 0")

    # Leibniz: d(e_i e_j) = d(e_i) e_j + (-1)^|e_i| e_i d(e_j), tensors indexed (i, j, k)
    d_of_product = field.reduce(np.tensordot(a.mult, a.diff, axes=([2], [1])))
    left_term = field.reduce(np.tensordot(a.diff, a.mult, axes=([0], [0])))
    right_term = field.reduce(np.transpose(np.tensordot(a.mult, a.diff, axes=([1], [0])), (0, 2, 1)))
    signs = np.array([koszul_sign(int(n)) for n in degrees], dtype=object if field.is_rational else np.int64)
    leibniz = field.reduce(d_of_product - left_term - signs[:, None, None] * right_term)
    report("leibniz", [(i, j) for (i, j, _) in _first_nonzero(leibniz)], "d(xy) != dx y + (-1)^|x| x dy")

    # associativity, one left factor at a time
    for i in range(dim):
        left = field.reduce(np.tensordot(a.mult[i], a.mult, axes=([1], [0])))          # (j, k, l)
        inner = field.reduce(np.tensordot(a.mult, a.mult[i], axes=([2], [0])))        # (j, k, l)
        for (j, k, _) in _first_nonzero(field.reduce(left - inner)):
            report("associativity", [(i, j, k)], "(xy)z != x(yz)")
        if len(violations) >= max_violations:
            break

    result = DGAReport(not violations, violations)
    if violations:
        logger.info(f"❌ Invalid dg-algebra: {result.error_message}")
    return result


# -- cohomology -----------------------------------------------------------------

@dataclass
class CohomologyAlgebra:
    """H(A) with zero differential plus section (A <- H) and projection (A -> H on cocycles)."""
    algebra: WeightedDGA
    section: Matrix
    projection: Matrix

    def classes(self, n: int, p: Optional[int] = None) -> List[int]:
        h = self.algebra
        if p is None:
            return h.degree_indices(n)
        return h.piece_indices(n, p)

    def betti(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for b in self.algebra.basis:
            out[b.degree] = out.get(b.degree, 0) + 1
        return out

    def class_of(self, cocycle: Matrix) -> Matrix:
        return self.algebra.field.mul(self.projection, cocycle)


def cohomology_algebra(a: WeightedDGA) -> CohomologyAlgebra:
    """H(A) piece by piece in (degree, weight), unit class first, with the induced product."""
    field = a.field
    dim = a.dim
    section_columns: List[Matrix] = []
    projection_rows: List[Matrix] = []
    basis: List[BasisElement] = []
    unit_class: Optional[int] = None
    for (n, p) in sorted(a.pieces()):
        idx = a.piece_indices(n, p)
        up, down = a.piece_indices(n + 1, p), a.piece_indices(n - 1, p)
        outgoing = a.diff[np.ix_(up, idx)] if up else field.zeros(0, len(idx))
        incoming = a.diff[np.ix_(idx, down)] if down else field.zeros(len(idx), 0)
        preferred = None
        if a.unit is not None and a.unit in idx:
            preferred = field.zeros(len(idx), 1)
            preferred[idx.index(a.unit), 0] = 1
        piece = degree_homology(field, outgoing, incoming, preferred)
        for t in range(piece.dim):
            column = np.zeros(dim, dtype=field.dtype)
            column[idx] = piece.section[:, t]
            row = np.zeros(dim, dtype=field.dtype)
            row[idx] = piece.projection[t, :]
            nonzero = np.flatnonzero(column != 0)
            if len(nonzero) == 1 and column[nonzero[0]] == 1:
                label = f"[{a.basis[nonzero[0]].label}]"
            else:
                label = f"[h{n}.{p}.{t}]"
            if preferred is not None and t == 0 and column[a.unit] == 1 and len(nonzero) == 1:
                unit_class = len(basis)
            basis.append(BasisElement(label, n, p))
            section_columns.append(column)
            projection_rows.append(row)
    h = len(basis)
    section = field.reduce(np.array(section_columns, dtype=field.dtype).reshape(h, dim).T) if h else field.zeros(dim, 0)
    projection = field.reduce(np.array(projection_rows, dtype=field.dtype).reshape(h, dim)) if h else field.zeros(0, dim)
    if h:
        lifted = np.tensordot(np.tensordot(section, a.mult, axes=([0], [0])), section, axes=([1], [0]))
        products = np.transpose(field.reduce(lifted), (0, 2, 1))
        mult = field.reduce(np.tensordot(products, projection, axes=([2], [1])))
    else:
        mult = np.zeros((0, 0, 0), dtype=field.dtype)
    algebra = WeightedDGA(
        field_config=a.field_config,
        modulus=a.modulus,
        basis=basis,
        mult=mult,
        diff=field.zeros(h, h),
        unit=unit_class,
        degree_cap=a.degree_cap,
    )
    logger.debug(f"Cohomology Betti numbers {CohomologyAlgebra(algebra, section, projection).betti()}")
    return CohomologyAlgebra(algebra, section, projection)


@dataclass
class ConnectivityReport:
    connected: bool
    r: Optional[int]          # H^i = 0 for 1 <= i <= r; None when not connected
    simply_connected: bool
    betti: Dict[int, int]

    @property
    def error_message(self) -> Optional[str]:
        if self.connected:
            return None
        return f"H^0 has dimension {self.betti.get(0, 0)}, expected 1"


def connectivity(a: WeightedDGA, cohomology: Optional[CohomologyAlgebra] = None) -> ConnectivityReport:
    """Largest r with H^0 = k and H^i = 0 for 1 <= i <= r, capped at the top degree."""
    coh = cohomology or cohomology_algebra(a)
    betti = coh.betti()
    negative = any(n < 0 and dim for n, dim in betti.items())
    connected = betti.get(0, 0) == 1 and not negative
    if not connected:
        return ConnectivityReport(False, None, False, betti)
    top = a.top_degree
    if not any(dim for n, dim in betti.items() if n >= 1):
        return ConnectivityReport(True, top, True, betti)
    r = 0
    while r + 1 <= top and not betti.get(r + 1, 0):
        r += 1
    return ConnectivityReport(True, r, r >= 1, betti)


def dga_purity_check(a: WeightedDGA, alpha, cohomology: Optional[CohomologyAlgebra] = None) -> PurityReport:
    """H^n(A)^p = 0 unless p = alpha n (mod m)."""
    alpha = parse_alpha(alpha)
    if alpha <= 0 or (a.modulus is not None and alpha >= a.modulus):
        raise InputError(f"alpha = {alpha} must lie strictly between 0 and the modulus")
    coh = cohomology or cohomology_algebra(a)
    dims: Dict[Tuple[int, int], int] = {}
    for b in coh.algebra.basis:
        dims[(b.degree, b.weight)] = dims.get((b.degree, b.weight), 0) + 1
    violations = [(n, p, k) for (n, p), k in sorted(dims.items()) if not on_diagonal(n, p, alpha, a.modulus)]
    return PurityReport(not violations, alpha, a.modulus, dims, violations)


# -- constructions ----------------------------------------------------------------

def parse_word(word: Union[str, Sequence[str]]) -> Word:
    if isinstance(word, str):
        return tuple() if word in ("", UNIT_LABEL) else tuple(word.split(WORD_SEPARATOR))
    return tuple(word)


def word_label(word: Word) -> str:
    return WORD_SEPARATOR.join(word) if word else UNIT_LABEL


def monomial_algebra(
    field_config: FieldConfig,
    generators: Sequence[Tuple[str, int, int]],
    differential: Optional[Dict[str, Sequence[Tuple[Union[int, str], Union[str, Sequence[str]]]]]] = None,
    degree_cap: Optional[int] = None,
    modulus: Optional[int] = None,
    allowed: Optional[Iterable[Union[str, Sequence[str]]]] = None,
) -> WeightedDGA:
    """Tensor algebra on generators modulo words above `degree_cap` and words outside `allowed`.

    `allowed` must be closed under taking subwords. The differential is given on
    generators as lists of (coefficient, word) and extended by the signed Leibniz rule.
    """
    field = field_config.field
    gens = [(label, int(deg), int(w)) for label, deg, w in generators]
    order = {label: i for i, (label, _, _) in enumerate(gens)}
    if len(order) != len(gens):
        raise InputError("generator labels must be distinct")
    degree_of = {label: deg for label, deg, _ in gens}
    weight_of = {label: w for label, _, w in gens}
    allowed_words = None if allowed is None else {parse_word(w) for w in allowed}
    if allowed_words is None and (degree_cap is None or any(deg < 1 for _, deg, _ in gens)):
        raise InputError("an infinite tensor algebra needs a degree cap and positive generator degrees")
    if allowed_words is not None:
        for word in allowed_words:
            for length in range(1, len(word)):
                for start in range(len(word) - length + 1):
                    if word[start:start + length] not in allowed_words:
                        raise InputError(f"allowed words are not subword-closed: {word_label(word)}")

    def admissible(word: Word) -> bool:
        if degree_cap is not None and sum(degree_of[g] for g in word) > degree_cap:
            return False
        if allowed_words is not None and len(word) > 0 and word not in allowed_words:
            return False
        return True

    words: List[Word] = [()]
    frontier: List[Word] = [()]
    while frontier:
        extended = []
        for word in frontier:
            for label, _, _ in gens:
                candidate = word + (label,)
                if admissible(candidate):
                    extended.append(candidate)
        words.extend(extended)
        frontier = extended
    words.sort(key=lambda w: (len(w), [order[g] for g in w]))
    position = {w: i for i, w in enumerate(words)}
    dim = len(words)

    basis = [
        BasisElement(word_label(w), sum(degree_of[g] for g in w), sum(weight_of[g] for g in w))
        for w in words
    ]
    mult = np.zeros((dim, dim, dim), dtype=field.dtype)
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            k = position.get(u + v)
            if k is not None:
                mult[i, j, k] = 1

    gen_diff: Dict[str, Dict[Word, Union[int, Fraction]]] = {}
    for label, terms in (differential or {}).items():
        if label not in order:
            raise InputError(f"differential given for unknown generator {label!r}")
        image: Dict[Word, Union[int, Fraction]] = {}
        for coefficient, word in terms:
            word = parse_word(word)
            unknown = [g for g in word if g not in order]
            if unknown:
                raise InputError(f"d({label}) uses unknown generators {unknown}")
            image[word] = field.element(image.get(word, 0) + field.element(coefficient))
        gen_diff[label] = image

    diff = np.zeros((dim, dim), dtype=field.dtype)
    for j, word in enumerate(words):
        prefix_degree = 0
        for i, g in enumerate(word):
            sign = koszul_sign(prefix_degree)
            for image_word, coefficient in gen_diff.get(g, {}).items():
                k = position.get(word[:i] + image_word + word[i + 1:])
                if k is not None:
                    diff[k, j] = field.element(diff[k, j] + sign * coefficient)
            prefix_degree += degree_of[g]
    algebra = WeightedDGA(
        field_config=field_config,
        modulus=modulus,
        basis=basis,
        mult=mult,
        diff=diff,
        unit=0,
        degree_cap=degree_cap,
    )
    logger.debug(f"Monomial algebra on {[g for g, _, _ in gens]} has dimension {dim}")
    return algebra


def tensor_dga(a: WeightedDGA, b: WeightedDGA, separator: str = "|") -> WeightedDGA:
    """A (x) B with (a (x) b)(a' (x) b') = (-1)^{|b||a'|} aa' (x) bb'."""
    if a.field_config.characteristic != b.field_config.characteristic or a.modulus != b.modulus:
        raise InputError("tensor factors must share field and modulus")
    field = a.field
    da, db = a.dim, b.dim
    basis = [
        BasisElement(f"{x.label}{separator}{y.label}", x.degree + y.degree, x.weight + y.weight)
        for x in a.basis for y in b.basis
    ]
    outer = np.multiply.outer(a.mult, b.mult)                     # (i, i', k, j, j', l)
    outer = np.transpose(outer, (0, 3, 1, 4, 2, 5))                # (i, j, i', j', k, l)
    signs = np.array(
        [[koszul_sign(y.degree * x.degree) for x in a.basis] for y in b.basis],
        dtype=object if field.is_rational else np.int64,
    )                                                              # (j, i')
    outer = outer * signs[None, :, :, None, None, None]
    mult = field.reduce(outer.reshape(da * db, da * db, da * db))
    parity = np.diag([koszul_sign(x.degree) for x in a.basis])
    diff = field.add(
        field.kron(a.diff, field.identity(db)),
        field.kron(field.reduce(parity), b.diff),
    )
    unit = None if a.unit is None or b.unit is None else a.unit * db + b.unit
    cap = None
    if a.degree_cap is not None and b.degree_cap is not None:
        cap = min(a.degree_cap, b.degree_cap)
    return WeightedDGA(a.field_config, a.modulus, basis, mult, diff, unit, cap)


def rebase(a: WeightedDGA, change: Matrix, labels: Optional[List[str]] = None) -> WeightedDGA:
    """Same algebra in the basis given by the columns of `change` (homogeneous, keeping the unit)."""
    field = a.field
    change = field.reduce(change)
    if change.shape != (a.dim, a.dim) or rank(field, change) < a.dim:
        raise InputError("change of basis must be an invertible square matrix")
    types = []
    for c in range(a.dim):
        kind = a.homogeneous_type(change[:, c])
        if kind is None:
            raise InputError(f"basis column {c} is not homogeneous")
        types.append(kind)
    unit = None
    if a.unit is not None:
        target = a.basis_vector(a.unit)
        for c in range(a.dim):
            if equal(change[:, c], target):
                unit = c
        if unit is None:
            raise InputError("the unit must be one of the new basis vectors")
    back = inverse(field, change)
    partial = np.tensordot(np.tensordot(change, a.mult, axes=([0], [0])), change, axes=([1], [0]))
    mult = field.reduce(np.tensordot(np.transpose(field.reduce(partial), (0, 2, 1)), back, axes=([2], [1])))
    diff = field.chain(back, a.diff, change)
    labels = labels or [a.basis[c].label if c == unit else f"b{c}" for c in range(a.dim)]
    basis = [BasisElement(labels[c], n, p) for c, (n, p) in enumerate(types)]
    return WeightedDGA(a.field_config, a.modulus, basis, mult, diff, unit, a.degree_cap)


# -- sub-quotients and maps -------------------------------------------------------

def restrict_algebra(a: WeightedDGA, keep: Sequence[int]) -> WeightedDGA:
    """Structure constants restricted to the basis elements `keep`.

    This is A modulo the span of the remaining basis elements, which must be a dg-ideal.
    """
    keep = list(keep)
    unit = keep.index(a.unit) if a.unit is not None and a.unit in keep else None
    return WeightedDGA(
        field_config=a.field_config,
        modulus=a.modulus,
        basis=[a.basis[i] for i in keep],
        mult=a.mult[np.ix_(keep, keep, keep)],
        diff=a.diff[np.ix_(keep, keep)],
        unit=unit,
        degree_cap=a.degree_cap,
    )


def truncate_algebra(a: WeightedDGA, top: int) -> WeightedDGA:
    """A / A^{>top}."""
    out = restrict_algebra(a, [i for i, b in enumerate(a.basis) if b.degree <= top])
    out.degree_cap = top if a.degree_cap is None else min(top, a.degree_cap)
    return out


def is_dg_ideal(a: WeightedDGA, indices: Sequence[int]) -> bool:
    """The span of the given basis elements is closed under d and two-sided products."""
    inside = sorted(set(indices))
    outside = [i for i in range(a.dim) if i not in set(inside)]
    everything = list(range(a.dim))
    if not inside or not outside:
        return True
    return (
        is_zero(a.diff[np.ix_(outside, inside)])
        and is_zero(a.mult[np.ix_(inside, everything, outside)])
        and is_zero(a.mult[np.ix_(everything, inside, outside)])
    )


def dga_complex(a: WeightedDGA, top: Optional[int] = None) -> Complex:
    """Cochain complex of A in degrees <= top; the differential leaving degree top is dropped."""
    if top is None:
        return a.as_complex()
    degrees = [n for n in a.degrees if n <= top]
    diff = {}
    for n in degrees:
        rows, cols = a.degree_indices(n + 1), a.degree_indices(n)
        if n < top and rows:
            diff[n] = a.diff[np.ix_(rows, cols)]
    return Complex(
        field=a.field,
        dims={n: len(a.degree_indices(n)) for n in degrees},
        diff=diff,
        variance=Variance.COHOMOLOGICAL,
    )


def degree_blocks(fmat: Matrix, source: WeightedDGA, target: WeightedDGA,
                  top: Optional[int] = None) -> Dict[int, Matrix]:
    out = {}
    for n in sorted(set(source.degrees) | set(target.degrees)):
        if top is None or n <= top:
            out[n] = fmat[np.ix_(target.degree_indices(n), source.degree_indices(n))]
    return out


@dataclass
class DGAMapReport:
    """Exact checks of a map of weighted dg-algebras given as one (target x source) matrix."""
    homogeneous: bool
    unital: bool
    chain: bool
    multiplicative: bool
    quasi_iso: Optional[QuasiIsoReport] = None

    @property
    def ok(self) -> bool:
        quasi = self.quasi_iso is None or self.quasi_iso.is_quasi_iso
        return self.homogeneous and self.unital and self.chain and self.multiplicative and quasi

    @property
    def error_message(self) -> Optional[str]:
        if self.ok:
            return None
        failed = [name for name in ("homogeneous", "unital", "chain", "multiplicative") if not getattr(self, name)]
        if self.quasi_iso is not None and not self.quasi_iso.is_quasi_iso:
            failed.append(f"quasi-isomorphism in degrees {self.quasi_iso.failing_degrees}")
        return "map is not " + ", ".join(failed)


def check_dga_map(fmat: Matrix, source: WeightedDGA, target: WeightedDGA,
                  quasi_bound: Optional[int] = None, check_quasi: bool = True,
                  chain_top: Optional[int] = None, mult_top: Optional[int] = None,
                  compare_weights: bool = True) -> DGAMapReport:
    """Check that f: source -> target is a map of dg-algebras and, optionally, a quasi-isomorphism.

    Commutation with d is checked on source degrees <= chain_top, products on pairs of total
    degree <= mult_top (default: the source's degree cap) and H^i(f) for i <= quasi_bound.
    Weights are compared only when asked to and both algebras use the same modulus.
    """
    field = source.field
    fmat = field.reduce(fmat)
    if fmat.shape != (target.dim, source.dim):
        raise InputError(f"map has shape {fmat.shape}, expected {(target.dim, source.dim)}")
    same_weights = compare_weights and source.modulus == target.modulus
    homogeneous = True
    for (t, s) in np.argwhere(fmat != 0):
        tb, sb = target.basis[t], source.basis[s]
        if tb.degree != sb.degree or (same_weights and tb.weight != sb.weight):
            homogeneous = False
            break

    unital = True
    if source.unit is not None:
        unital = target.unit is not None and equal(fmat[:, source.unit], target.basis_vector(target.unit))

    columns = [i for i, b in enumerate(source.basis) if chain_top is None or b.degree <= chain_top]
    defect = field.sub(field.mul(target.diff, fmat), field.mul(fmat, source.diff))
    chain = is_zero(defect[:, columns])

    multiplicative = True
    if source.dim and target.dim:
        mult_top = source.degree_cap if mult_top is None else mult_top
        left = field.reduce(np.tensordot(source.mult, fmat, axes=([2], [1])))
        partial = field.reduce(np.tensordot(fmat, target.mult, axes=([0], [0])))
        right = np.transpose(field.reduce(np.tensordot(partial, fmat, axes=([1], [0]))), (0, 2, 1))
        degrees = np.array([b.degree for b in source.basis])
        mask = np.ones((source.dim, source.dim), dtype=bool)
        if mult_top is not None:
            mask = (degrees[:, None] + degrees[None, :]) <= mult_top
        multiplicative = is_zero(field.sub(left, right)[mask])

    quasi = None
    if check_quasi:
        top = None if quasi_bound is None else quasi_bound + 1
        s_complex, t_complex = dga_complex(source, top), dga_complex(target, top)
        try:
            quasi = is_n_quasi_iso(degree_blocks(fmat, source, target, top), s_complex, t_complex, quasi_bound)
        except InputError:
            quasi = QuasiIsoReport(False, {}, [quasi_bound if quasi_bound is not None else 0], None, quasi_bound)
    return DGAMapReport(homogeneous, unital, chain, multiplicative, quasi)


# -- Massey products ---------------------------------------------------------------

@dataclass
class MasseyResult:
    """Value set of a k-fold Massey product, as classes in cohomology coordinates."""
    defined: bool
    order: int
    representative: Optional[Matrix] = None
    degree: Optional[int] = None
    weight: Optional[int] = None
    indeterminacy: Optional[Matrix] = None      # columns span the linear part of the value set
    samples: List[Matrix] = dataclass_field(default_factory=list)
    contains_zero: Optional[bool] = None        # None means inconclusive
    search_exhausted: bool = False
    failing_pair: Optional[Tuple[int, int]] = None
    systems_explored: int = 0
    error_message: Optional[str] = None


class MasseyVanishing(Enum):
    FORCED = "forced-vanish"
    NOT_FORCED = "not-forced"


def _bar(x: Matrix, degree: int) -> Matrix:
    """(-1)^(1 + |x|) x."""
    return x if degree % 2 else -x


def _resolve_classes(coh: CohomologyAlgebra, classes: Sequence) -> List[Matrix]:
    h = coh.algebra
    out = []
    for c in classes:
        if isinstance(c, (int, np.integer)):
            if not 0 <= int(c) < h.dim:
                raise InputError(f"class index {c} out of range")
            out.append(h.basis_vector(int(c)))
        elif isinstance(c, str):
            out.append(h.basis_vector(h.index(c)))
        else:
            vector = h.field.reduce(np.asarray(c, dtype=h.field.dtype).reshape(-1))
            if vector.shape != (h.dim,):
                raise InputError(f"class vector has length {vector.shape[0]}, expected {h.dim}")
            out.append(vector)
    for i, vector in enumerate(out):
        if h.homogeneous_type(vector) is None:
            raise InputError(f"class {i + 1} must be non-zero and homogeneous in degree and weight")
    return out


def k_massey(a: WeightedDGA, classes: Sequence, cohomology: Optional[CohomologyAlgebra] = None,
             settings: Optional[MasseyConfig] = None) -> MasseyResult:
    """Enumerate weight-homogeneous defining systems for <x_1, ..., x_k>.

    d a_ij = sum_{q=i}^{j-1} bar(a_iq) a_{q+1,j} with bar(x) = (-1)^(1+|x|) x, and the value
    is sum_q bar(a_1q) a_{q+1,k}. Layers below the last are enumerated over cocycle
    representatives of cohomology; the last layer enters the value linearly and
    contributes the indeterminacy subspace.
    """
    settings = settings or config.massey
    coh = cohomology or cohomology_algebra(a)
    field = a.field
    h = coh.algebra
    xs = _resolve_classes(coh, classes)
    k = len(xs)
    if k < 3:
        raise InputError(f"Massey products need at least three classes, got {k}")
    types = [h.homogeneous_type(x) for x in xs]
    degrees = [t[0] for t in types]
    weights = [t[1] for t in types]

    def deg(i: int, j: int) -> int:
        return sum(degrees[i - 1:j]) - (j - i)

    def wt(i: int, j: int) -> int:
        return a.normalize(sum(weights[i - 1:j]))

    result = MasseyResult(defined=False, order=k, degree=deg(1, k) + 1, weight=wt(1, k))
    system: Dict[Tuple[int, int], Matrix] = {(i, i): field.mul(coh.section, xs[i - 1]) for i in range(1, k + 1)}

    def rhs(i: int, j: int) -> Matrix:
        total = np.zeros(a.dim, dtype=field.dtype)
        for q in range(i, j):
            total = total + a.product(_bar(system[(i, q)], deg(i, q)), system[(q + 1, j)])
        return field.reduce(total)

    def solve_pair(i: int, j: int) -> Optional[Matrix]:
        target = rhs(i, j)
        n, p = deg(i, j), wt(i, j)
        rows, cols = a.piece_indices(n + 1, p), a.piece_indices(n, p)
        outside = np.ones(a.dim, dtype=bool)
        outside[rows] = False
        if not is_zero(target[outside]):
            raise RuntimeError(f"defining-system equation for ({i}, {j}) left its (degree, weight) piece")
        solution = np.zeros(a.dim, dtype=field.dtype)
        if not rows:
            return solution
        if not cols:
            return solution if is_zero(target[rows]) else None
        local = solve_matrix(field, a.diff[np.ix_(rows, cols)], target[rows].reshape(-1, 1))
        if local is None:
            return None
        solution[cols] = local[:, 0]
        return solution

    lower_pairs = [(i, i + length) for length in range(1, k - 2) for i in range(1, k - length + 1)]
    final_pairs = [(1, k - 1), (2, k)]
    cocycles = {pair: coh.section[:, coh.classes(deg(*pair), wt(*pair))] for pair in lower_pairs}
    param_dim = sum(c.shape[1] for c in cocycles.values())

    # indeterminacy: bar(x_1) H + H x_k over all weights
    columns = []
    for c in coh.classes(deg(2, k)):
        columns.append(coh.class_of(a.product(_bar(system[(1, 1)], degrees[0]), coh.section[:, c])))
    for c in coh.classes(deg(1, k - 1)):
        columns.append(coh.class_of(a.product(_bar(coh.section[:, c], deg(1, k - 1)), system[(k, k)])))
    indeterminacy = image_basis(field, field.hstack(columns, h.dim)) if columns else field.zeros(h.dim, 0)
    result.indeterminacy = indeterminacy

    if field.is_rational:
        grid = [Fraction(v) for v in range(-settings.rational_height, settings.rational_height + 1)]
        exhaustive = param_dim == 0
        cap = settings.max_param_dim_rational
    else:
        grid = list(range(field.characteristic))
        exhaustive = (param_dim <= settings.max_param_dim_finite
                      and field.characteristic ** param_dim <= settings.max_systems)
        cap = settings.max_param_dim_finite
    if param_dim > cap:
        logger.info(f"Massey parameter dimension {param_dim} exceeds cap {cap}; search is partial")

    state = {"found": False, "stopped": False}

    def finish_system():
        for pair in final_pairs:
            solution = solve_pair(*pair)
            if solution is None:
                result.failing_pair = result.failing_pair or pair
                return
            system[pair] = solution
        value = np.zeros(a.dim, dtype=field.dtype)
        for q in range(1, k):
            value = value + a.product(_bar(system[(1, q)], deg(1, q)), system[(q + 1, k)])
        value_class = coh.class_of(field.reduce(value))
        result.systems_explored += 1
        result.defined = True
        if result.representative is None:
            result.representative = value_class
        if len(result.samples) < 16 and not any(equal(value_class, s) for s in result.samples):
            result.samples.append(value_class)
        if is_zero(value_class) or (indeterminacy.shape[1] and
                                     solve_matrix(field, indeterminacy, value_class.reshape(-1, 1)) is not None):
            state["found"] = True
        if result.systems_explored >= settings.max_systems:
            state["stopped"] = True

    def explore(position: int):
        if state["found"] or state["stopped"]:
            return
        if position == len(lower_pairs):
            finish_system()
            return
        pair = lower_pairs[position]
        particular = solve_pair(*pair)
        if particular is None:
            result.failing_pair = result.failing_pair or pair
            return
        basis = cocycles[pair]
        for coefficients in itertools.product(grid, repeat=basis.shape[1]):
            if basis.shape[1]:
                shift = field.mul(basis, field.vector(list(coefficients)))
                system[pair] = field.reduce(particular + shift)
            else:
                system[pair] = particular
            explore(position + 1)
            if state["found"] or state["stopped"]:
                return

    explore(0)

    if not result.defined:
        i, j = result.failing_pair or (1, 2)
        result.error_message = f"not defined: no solution for the ({i}, {j}) entry"
        result.contains_zero = None
        return result
    result.search_exhausted = exhaustive and not state["stopped"]
    if state["found"]:
        result.contains_zero = True
    elif result.search_exhausted:
        result.contains_zero = False
    else:
        result.contains_zero = None
    logger.debug(
        f"Massey <{k} classes>: explored {result.systems_explored} systems, contains_zero={result.contains_zero}"
    )
    return result


def triple_massey(a: WeightedDGA, x, y, z, cohomology: Optional[CohomologyAlgebra] = None,
                  settings: Optional[MasseyConfig] = None) -> MasseyResult:
    """<x, y, z> = representative + (bar(x) H + H z); requires xy = yz = 0 in H(A)."""
    return k_massey(a, [x, y, z], cohomology, settings)


def vanishing_predicate(alpha, modulus: Optional[int], k: int) -> MasseyVanishing:
    """k-fold Massey products of an alpha-pure algebra vanish when alpha (k - 2) / m is not an integer."""
    alpha = parse_alpha(alpha)
    if k < 3:
        raise InputError(f"Massey products need k >= 3, got {k}")
    if modulus is None:
        return MasseyVanishing.FORCED
    if not 0 < alpha < modulus:
        raise InputError(f"alpha = {alpha} must lie strictly between 0 and {modulus}")
    ratio = alpha * (k - 2) / modulus
    return MasseyVanishing.FORCED if ratio.denominator != 1 else MasseyVanishing.NOT_FORCED


def low_degree_bound(alpha, modulus: int, r: int) -> int:
    """Degrees n <= ceil(m r / alpha) + 2r + 1 carry no non-trivial Massey products for r-connected pure algebras."""
    alpha = parse_alpha(alpha)
    return math.ceil(Fraction(modulus * r) / alpha) + 2 * r + 1


def arrangement_alpha(c: int) -> Fraction:
    return Fraction(c, 2 * c - 1)


def arrangement_massey_vanishing(c: int, h: int, k: int) -> MasseyVanishing:
    """Codimension-c arrangement complements: cohomology is pure of slope c / (2c - 1) mod h."""
    return vanishing_predicate(arrangement_alpha(c), h, k)


def arrangement_massey_free_degree(c: int, h: int) -> int:
    """ceil(h (2c - 1)(2c - 2) / c) + 4c - 3."""
    return low_degree_bound(arrangement_alpha(c), h, 2 * c - 2)


def arrangement_formality_degree(c: int, h: int) -> int:
    """floor((h - 1)(2c - 1) / c)."""
    return math.floor(Fraction(h - 1) / arrangement_alpha(c))
