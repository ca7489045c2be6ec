"""
Complexes and the Ho-morphism Calculus

Bounded chain and cochain complexes over an exact field, complexes with an
endomorphism (C, phi), homology with fixed sections, tensor products with
Koszul signs, and pre-morphisms (f, F) with their differential D,
composition, homotopies, mapping cylinders and homology models.

Pre-morphisms are indexed homologically: a pre-morphism of degree n has
f_k : C_k -> C'_{k-n} and F_k : C_k -> C'_{k-n+1}. D raises the degree
by one, so ho-morphisms have degree 0 and homotopies degree -1.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import InputError
from .field_linalg import (
    Field,
    Matrix,
    complement_columns,
    equal,
    image_basis,
    inverse,
    is_zero,
    kernel_basis,
    rank,
    solve_matrix,
)

logger = logging.getLogger(__name__)

GradedMap = Dict[int, Matrix]


class Variance(Enum):
    """Direction of the differential."""
    HOMOLOGICAL = "homological"      # d_n : C_n -> C_{n-1}
    COHOMOLOGICAL = "cohomological"  # d^n : C^n -> C^{n+1}

    @property
    def step(self) -> int:
        return -1 if self is Variance.HOMOLOGICAL else 1


def koszul_sign(degree: int) -> int:
    return -1 if degree % 2 else 1


@dataclass
class Complex:
    """Finite-dimensional bounded complex; `diff` is keyed by source degree."""
    field: Field
    dims: Dict[int, int]
    diff: GradedMap = dataclass_field(default_factory=dict)
    variance: Variance = Variance.HOMOLOGICAL

    def __post_init__(self):
        self.dims = {int(n): int(d) for n, d in self.dims.items() if int(d) > 0}
        step = self.variance.step
        cleaned: GradedMap = {}
        for n, matrix in self.diff.items():
            n = int(n)
            matrix = self.field.reduce(matrix)
            expected = (self.dim(n + step), self.dim(n))
            if matrix.shape != expected:
                raise InputError(f"d at degree {n} has shape {matrix.shape}, expected {expected}")
            if not is_zero(matrix):
                cleaned[n] = matrix
        self.diff = cleaned
        for n in self.diff:
            if not is_zero(self.field.mul(self.d(n + step), self.d(n))):
                raise InputError(f"d o d != 0 starting at degree {n}")

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    @property
    def degrees(self) -> List[int]:
        return sorted(self.dims)

    @property
    def support(self) -> Tuple[int, int]:
        if not self.dims:
            return (0, -1)
        return (min(self.dims), max(self.dims))

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def d(self, n: int) -> Matrix:
        """Differential leaving degree n."""
        if n in self.diff:
            return self.diff[n]
        return self.field.zeros(self.dim(n + self.variance.step), self.dim(n))

    def incoming(self, n: int) -> Matrix:
        """Differential arriving in degree n."""
        return self.d(n - self.variance.step)

    def homological(self) -> "Complex":
        if self.variance is Variance.HOMOLOGICAL:
            return self
        return Complex(
            field=self.field,
            dims={-n: d for n, d in self.dims.items()},
            diff={-n: m for n, m in self.diff.items()},
            variance=Variance.HOMOLOGICAL,
        )

    def with_variance(self, variance: Variance) -> "Complex":
        if variance is self.variance:
            return self
        return Complex(
            field=self.field,
            dims={-n: d for n, d in self.dims.items()},
            diff={-n: m for n, m in self.diff.items()},
            variance=variance,
        )


def unit_complex(field: Field, variance: Variance = Variance.HOMOLOGICAL) -> Complex:
    """The field in degree 0."""
    return Complex(field=field, dims={0: 1}, variance=variance)


@dataclass
class EndoComplex:
    """A complex with an endomorphism commuting with d; missing degrees mean zero."""
    complex: Complex
    endo: GradedMap = dataclass_field(default_factory=dict)

    def __post_init__(self):
        c = self.complex
        endo: GradedMap = {}
        for n, matrix in self.endo.items():
            n = int(n)
            matrix = c.field.reduce(matrix)
            if matrix.shape != (c.dim(n), c.dim(n)):
                raise InputError(f"phi at degree {n} has shape {matrix.shape}, expected {(c.dim(n), c.dim(n))}")
            if c.dim(n):
                endo[n] = matrix
        self.endo = endo
        for n in c.degrees:
            left = c.field.mul(c.d(n), self.phi(n))
            right = c.field.mul(self.phi(n + c.variance.step), c.d(n))
            if not equal(left, right):
                raise InputError(f"d o phi != phi o d at degree {n}")

    @property
    def field(self) -> Field:
        return self.complex.field

    def phi(self, n: int) -> Matrix:
        if n in self.endo:
            return self.endo[n]
        dim = self.complex.dim(n)
        return self.field.zeros(dim, dim)

    def homological(self) -> "EndoComplex":
        if self.complex.variance is Variance.HOMOLOGICAL:
            return self
        return EndoComplex(self.complex.homological(), {-n: m for n, m in self.endo.items()})

    def with_variance(self, variance: Variance) -> "EndoComplex":
        if variance is self.complex.variance:
            return self
        return EndoComplex(self.complex.with_variance(variance), {-n: m for n, m in self.endo.items()})


# -- homology -----------------------------------------------------------------

@dataclass
class DegreeHomology:
    """Cycles, boundaries and a section/projection pair in one degree."""
    cycles: Matrix
    boundaries: Matrix
    section: Matrix      # homology coordinates -> cycles, dim C_n x h
    projection: Matrix   # C_n -> homology coordinates, h x dim C_n; exact on cycles

    @property
    def dim(self) -> int:
        return self.section.shape[1]


@dataclass
class HomologyData:
    complex: Complex
    degrees: Dict[int, DegreeHomology]

    def dim(self, n: int) -> int:
        return self.degrees[n].dim if n in self.degrees else 0

    @property
    def dims(self) -> Dict[int, int]:
        return {n: h.dim for n, h in self.degrees.items() if h.dim}

    def section(self, n: int) -> Matrix:
        if n in self.degrees:
            return self.degrees[n].section
        return self.complex.field.zeros(self.complex.dim(n), 0)

    def projection(self, n: int) -> Matrix:
        if n in self.degrees:
            return self.degrees[n].projection
        return self.complex.field.zeros(0, self.complex.dim(n))

    def classify(self, n: int, cycle: Matrix) -> Matrix:
        """Homology coordinates of a cycle (vector or column block)."""
        return self.complex.field.mul(self.projection(n), cycle)


def degree_homology(field: Field, outgoing: Matrix, incoming: Matrix,
                    preferred: Optional[Matrix] = None) -> DegreeHomology:
    """Homology at one spot of ... -> incoming -> C_n -> outgoing -> ...

    Preferred cycles, when given, are tried before the kernel basis when
    choosing section representatives.
    """
    n = outgoing.shape[1]
    cycles = kernel_basis(field, outgoing)
    boundaries = image_basis(field, incoming)
    candidates = cycles
    if preferred is not None:
        closed = [j for j in range(preferred.shape[1]) if is_zero(field.mul(outgoing, preferred[:, j]))]
        candidates = field.hstack([preferred[:, closed], cycles], n)
    section = complement_columns(field, boundaries, candidates)
    partial = field.hstack([boundaries, section], n)
    filler = complement_columns(field, partial, field.identity(n))
    full_inverse = inverse(field, field.hstack([partial, filler], n))
    b, h = boundaries.shape[1], section.shape[1]
    projection = field.reduce(full_inverse[b:b + h, :])
    return DegreeHomology(cycles=cycles, boundaries=boundaries, section=section, projection=projection)


def homology(c: Complex, preferred: Optional[GradedMap] = None) -> HomologyData:
    """Homology of every degree of C with deterministic bases."""
    preferred = preferred or {}
    data = {
        n: degree_homology(c.field, c.d(n), c.incoming(n), preferred.get(n))
        for n in c.degrees
    }
    logger.debug(f"Homology dims {({n: h.dim for n, h in data.items() if h.dim})}")
    return HomologyData(complex=c, degrees=data)


def homology_endo(hd: HomologyData, endo: GradedMap) -> GradedMap:
    """Matrices of H(phi) in the fixed bases."""
    field = hd.complex.field
    out: GradedMap = {}
    for n in hd.complex.degrees:
        if hd.dim(n):
            phi = endo.get(n, field.zeros(hd.complex.dim(n), hd.complex.dim(n)))
            out[n] = field.chain(hd.projection(n), phi, hd.section(n))
    return out


def is_chain_map(f: GradedMap, source: Complex, target: Complex) -> bool:
    """d' f_n = f_{n+step} d_n in every degree; f is degree-preserving."""
    if source.variance is not target.variance:
        return False
    field = source.field
    step = source.variance.step
    degrees = set(source.degrees) | {n - step for n in target.degrees}
    for n in degrees:
        left = field.mul(target.d(n), _component(field, f, n, target.dim(n), source.dim(n)))
        right = field.mul(
            _component(field, f, n + step, target.dim(n + step), source.dim(n + step)), source.d(n)
        )
        if not equal(left, right):
            return False
    return True


def _component(field: Field, maps: GradedMap, n: int, rows: int, cols: int) -> Matrix:
    if n in maps:
        matrix = field.reduce(maps[n])
        if matrix.shape != (rows, cols):
            raise InputError(f"map at degree {n} has shape {matrix.shape}, expected {(rows, cols)}")
        return matrix
    return field.zeros(rows, cols)


def induced_map(f: GradedMap, source: HomologyData, target: HomologyData) -> GradedMap:
    """Matrix of H(f) in the fixed homology bases."""
    if not is_chain_map(f, source.complex, target.complex):
        raise InputError("map does not commute with the differentials")
    field = source.complex.field
    out: GradedMap = {}
    for n in set(source.degrees) | set(target.degrees):
        fn = _component(field, f, n, target.complex.dim(n), source.complex.dim(n))
        out[n] = field.chain(target.projection(n), fn, source.section(n))
    return out


@dataclass
class DegreeComparison:
    source_dim: int
    target_dim: int
    rank: int

    @property
    def is_iso(self) -> bool:
        return self.source_dim == self.target_dim == self.rank


@dataclass
class QuasiIsoReport:
    """Per-degree comparison of H(f); degrees follow the complexes' own indexing."""
    is_quasi_iso: bool
    per_degree: Dict[int, DegreeComparison]
    failing_degrees: List[int]
    verified_up_to: Optional[int]
    bound: Optional[int] = None


def is_n_quasi_iso(f: GradedMap, source: Complex, target: Complex,
                   bound: Optional[int] = None) -> QuasiIsoReport:
    """Check that H_i(f) is an isomorphism for all i <= bound (all i when bound is None)."""
    hs, ht = homology(source), homology(target)
    induced = induced_map(f, hs, ht)
    per_degree: Dict[int, DegreeComparison] = {}
    for n in sorted(induced):
        matrix = induced[n]
        per_degree[n] = DegreeComparison(hs.dim(n), ht.dim(n), rank(source.field, matrix))
    failing = [n for n, cmp in per_degree.items() if not cmp.is_iso]
    relevant = [n for n in failing if bound is None or n <= bound]
    if failing:
        verified_up_to = min(failing) - 1
    elif per_degree:
        verified_up_to = max(per_degree)
    else:
        verified_up_to = None
    return QuasiIsoReport(
        is_quasi_iso=not relevant,
        per_degree=per_degree,
        failing_degrees=relevant,
        verified_up_to=verified_up_to,
        bound=bound,
    )


# -- tensor products ----------------------------------------------------------

TensorLayout = Dict[int, List[Tuple[int, int, int]]]


def tensor_layout(a: Complex, b: Complex) -> TensorLayout:
    """Blocks (left degree, right degree, offset) of each total degree, ordered by left degree."""
    layout: TensorLayout = {}
    for p in a.degrees:
        for r in b.degrees:
            layout.setdefault(p + r, []).append((p, r, 0))
    for n, blocks in layout.items():
        blocks.sort()
        offset = 0
        for i, (p, r, _) in enumerate(blocks):
            blocks[i] = (p, r, offset)
            offset += a.dim(p) * b.dim(r)
    return layout


def tensor(a: Complex, b: Complex) -> Complex:
    """Total complex of A (x) B with d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy."""
    if a.field != b.field:
        raise InputError(f"cannot tensor over {a.field} and {b.field}")
    if a.variance is not b.variance:
        raise InputError("cannot tensor complexes of different variance")
    field = a.field
    step = a.variance.step
    layout = tensor_layout(a, b)
    dims = {n: sum(a.dim(p) * b.dim(r) for p, r, _ in blocks) for n, blocks in layout.items()}
    diff: GradedMap = {}
    for n, blocks in layout.items():
        if not dims.get(n + step):
            continue
        target_offsets = {(p, r): off for p, r, off in layout[n + step]}
        matrix = field.zeros(dims[n + step], dims[n])
        for p, r, off in blocks:
            width = a.dim(p) * b.dim(r)
            if (p + step, r) in target_offsets:
                t_off = target_offsets[(p + step, r)]
                block = field.kron(a.d(p), field.identity(b.dim(r)))
                matrix[t_off:t_off + block.shape[0], off:off + width] += block
            if (p, r + step) in target_offsets:
                t_off = target_offsets[(p, r + step)]
                block = field.scale(koszul_sign(p), field.kron(field.identity(a.dim(p)), b.d(r)))
                matrix[t_off:t_off + block.shape[0], off:off + width] += block
        diff[n] = field.reduce(matrix)
    return Complex(field=field, dims=dims, diff=diff, variance=a.variance)


def tensor_maps(layout_source: Tuple[Complex, Complex], layout_target: Tuple[Complex, Complex],
                f: GradedMap, g: GradedMap) -> GradedMap:
    """Degree-preserving f (x) g between tensor products, block by block."""
    (a, b), (a2, b2) = layout_source, layout_target
    field = a.field
    src_layout, tgt_layout = tensor_layout(a, b), tensor_layout(a2, b2)
    out: GradedMap = {}
    for n, blocks in src_layout.items():
        rows = sum(a2.dim(p) * b2.dim(r) for p, r, _ in tgt_layout.get(n, []))
        cols = sum(a.dim(p) * b.dim(r) for p, r, _ in blocks)
        matrix = field.zeros(rows, cols)
        targets = {(p, r): off for p, r, off in tgt_layout.get(n, [])}
        for p, r, off in blocks:
            if (p, r) not in targets:
                continue
            block = field.kron(
                _component(field, f, p, a2.dim(p), a.dim(p)),
                _component(field, g, r, b2.dim(r), b.dim(r)),
            )
            t_off = targets[(p, r)]
            matrix[t_off:t_off + block.shape[0], off:off + block.shape[1]] = block
        out[n] = matrix
    return out


def tensor_endo(x: EndoComplex, y: EndoComplex) -> EndoComplex:
    """(C, phi) (x) (C', phi') = (C (x) C', phi (x) phi')."""
    total = tensor(x.complex, y.complex)
    endo = tensor_maps((x.complex, y.complex), (x.complex, y.complex), x.endo, y.endo)
    return EndoComplex(total, endo)


# -- pre-morphisms ------------------------------------------------------------

def _premorphism_sign(n: int) -> int:
    """Sign in front of (f phi - phi' f) in D; (-1)^(n(n-1)/2)."""
    return -1 if (n * (n - 1) // 2) % 2 else 1


@dataclass
class PreMorphism:
    """Pair (f, F) of degree n between homological endo-complexes."""
    source: EndoComplex
    target: EndoComplex
    degree: int
    f: GradedMap = dataclass_field(default_factory=dict)
    F: GradedMap = dataclass_field(default_factory=dict)

    def __post_init__(self):
        for side in (self.source, self.target):
            if side.complex.variance is not Variance.HOMOLOGICAL:
                raise InputError("pre-morphisms are indexed homologically; convert with .homological()")
        if self.source.field != self.target.field:
            raise InputError("source and target live over different fields")
        self.f = {int(k): self.f_at(int(k), m) for k, m in self.f.items()}
        self.F = {int(k): self.F_at(int(k), m) for k, m in self.F.items()}

    @property
    def field(self) -> Field:
        return self.source.field

    def f_at(self, k: int, matrix: Optional[Matrix] = None) -> Matrix:
        rows, cols = self.target.complex.dim(k - self.degree), self.source.complex.dim(k)
        return _component(self.field, {k: matrix} if matrix is not None else self.f, k, rows, cols)

    def F_at(self, k: int, matrix: Optional[Matrix] = None) -> Matrix:
        rows, cols = self.target.complex.dim(k - self.degree + 1), self.source.complex.dim(k)
        return _component(self.field, {k: matrix} if matrix is not None else self.F, k, rows, cols)

    def source_degrees(self) -> List[int]:
        return self.source.complex.degrees

    def is_zero(self) -> bool:
        return all(is_zero(self.f_at(k)) and is_zero(self.F_at(k)) for k in self.source_degrees())

    def equals(self, other: "PreMorphism") -> bool:
        if self.degree != other.degree:
            return False
        return all(
            equal(self.f_at(k), other.f_at(k)) and equal(self.F_at(k), other.F_at(k))
            for k in self.source_degrees()
        )


def premorphism_differential(p: PreMorphism) -> PreMorphism:
    """D(f, F) = (d'f - (-1)^n f d, F d + (-1)^n d'F + c_n (f phi - phi' f))."""
    field = p.field
    c, c2 = p.source.complex, p.target.complex
    n = p.degree
    sign = koszul_sign(n)
    c_n = _premorphism_sign(n)
    g: GradedMap = {}
    G: GradedMap = {}
    for k in c.degrees:
        g[k] = field.sub(
            field.mul(c2.d(k - n), p.f_at(k)),
            field.scale(sign, field.mul(p.f_at(k - 1), c.d(k))),
        )
        G[k] = field.add(
            field.mul(p.F_at(k - 1), c.d(k)),
            field.scale(sign, field.mul(c2.d(k - n + 1), p.F_at(k))),
            field.scale(c_n, field.sub(
                field.mul(p.f_at(k), p.source.phi(k)),
                field.mul(p.target.phi(k - n), p.f_at(k)),
            )),
        )
    return PreMorphism(p.source, p.target, n + 1, g, G)


class HoMorphism(PreMorphism):
    """Closed pre-morphism of degree 0: a chain map commuting with phi up to F."""

    def __init__(self, source: EndoComplex, target: EndoComplex,
                 f: Optional[GradedMap] = None, F: Optional[GradedMap] = None, check: bool = True):
        super().__init__(source, target, 0, dict(f or {}), dict(F or {}))
        if check and not premorphism_differential(self).is_zero():
            raise InputError("D(f, F) != 0: not a ho-morphism")

    @classmethod
    def from_premorphism(cls, p: PreMorphism) -> "HoMorphism":
        if p.degree != 0:
            raise InputError(f"ho-morphisms have degree 0, got {p.degree}")
        return cls(p.source, p.target, p.f, p.F)


def identity_ho_morphism(x: EndoComplex) -> HoMorphism:
    field = x.field
    return HoMorphism(x, x, {k: field.identity(x.complex.dim(k)) for k in x.complex.degrees})


def ho_compose(p: HoMorphism, r: HoMorphism) -> HoMorphism:
    """p o r = (f g, F g + f G) for p = (f, F) after r = (g, G)."""
    if r.target.complex.dims != p.source.complex.dims:
        raise InputError("ho-morphisms are not composable")
    field = p.field
    f: GradedMap = {}
    F: GradedMap = {}
    for k in r.source.complex.degrees:
        f[k] = field.mul(p.f_at(k), r.f_at(k))
        F[k] = field.add(field.mul(p.F_at(k), r.f_at(k)), field.mul(p.f_at(k + 1), r.F_at(k)))
    composite = HoMorphism(r.source, p.target, f, F, check=False)
    if not premorphism_differential(composite).is_zero():
        raise InputError("composite is not closed; inputs were not ho-morphisms")
    return composite


def _vec_block(field: Field, left: Matrix, right: Matrix) -> Matrix:
    """Matrix of X -> left X right on row-major vectorizations."""
    return field.kron(left, np.ascontiguousarray(right.T))


def find_homotopy(p: PreMorphism, r: PreMorphism) -> Optional[PreMorphism]:
    """Degree -1 pre-morphism (h, H) with D(h, H) = r - p, or None if none exists."""
    if p.degree != 0 or r.degree != 0:
        raise InputError("homotopies connect degree-0 pre-morphisms")
    field = p.field
    c, c2 = p.source.complex, p.target.complex
    phi, phi2 = p.source.phi, p.target.phi
    degrees = c.degrees

    unknowns: Dict[Tuple[str, int], Tuple[int, int, int]] = {}
    offset = 0
    for k in degrees:
        for name, shift in (("h", 1), ("H", 2)):
            shape = (c2.dim(k + shift), c.dim(k))
            unknowns[(name, k)] = (offset, shape[0], shape[1])
            offset += shape[0] * shape[1]

    rows: List[Matrix] = []
    rhs: List[Matrix] = []

    def equation(terms: List[Tuple[Tuple[str, int], Matrix, Matrix]], target: Matrix):
        size = target.size
        row = field.zeros(size, offset)
        for key, left, right in terms:
            if key not in unknowns:
                continue
            start, hr, hc = unknowns[key]
            if hr * hc == 0:
                continue
            row[:, start:start + hr * hc] += _vec_block(field, left, right)
        rows.append(field.reduce(row))
        rhs.append(target.reshape(-1, 1))

    for k in degrees:
        # d'h + hd = g - f
        equation(
            [
                (("h", k), c2.d(k + 1), field.identity(c.dim(k))),
                (("h", k - 1), field.identity(c2.dim(k)), c.d(k)),
            ],
            field.sub(r.f_at(k), p.f_at(k)),
        )
        # H d - d'H - h phi + phi' h = G - F
        equation(
            [
                (("H", k - 1), field.identity(c2.dim(k + 1)), c.d(k)),
                (("H", k), field.scale(-1, c2.d(k + 2)), field.identity(c.dim(k))),
                (("h", k), field.scale(-1, field.identity(c2.dim(k + 1))), phi(k)),
                (("h", k), phi2(k + 1), field.identity(c.dim(k))),
            ],
            field.sub(r.F_at(k), p.F_at(k)),
        )

    system = field.vstack(rows, offset)
    target = field.vstack(rhs, 1)
    solution = solve_matrix(field, system, target)
    if solution is None:
        logger.debug("No homotopy: linear system is inconsistent")
        return None
    h: GradedMap = {}
    H: GradedMap = {}
    for (name, k), (start, hr, hc) in unknowns.items():
        block = field.reduce(solution[start:start + hr * hc, 0].reshape(hr, hc))
        (h if name == "h" else H)[k] = block
    homotopy = PreMorphism(p.source, p.target, -1, h, H)
    difference = PreMorphism(
        p.source, p.target, 0,
        {k: field.sub(r.f_at(k), p.f_at(k)) for k in degrees},
        {k: field.sub(r.F_at(k), p.F_at(k)) for k in degrees},
    )
    if not premorphism_differential(homotopy).equals(difference):
        raise RuntimeError("homotopy solution failed its own check")
    return homotopy


# -- cylinders and homology models -------------------------------------------

def mapping_cylinder(p: HoMorphism) -> EndoComplex:
    """Cyl_n = C_{n-1} + C'_n + C_n with D = [[-d,0,0],[-f,d,0],[1,0,d]], psi = [[phi,0,0],[-F,phi',0],[0,0,phi]]."""
    field = p.field
    c, c2 = p.source.complex, p.target.complex
    lo = min(c.support[0], c2.support[0])
    hi = max(c.support[1] + 1, c2.support[1])

    def parts(n: int) -> List[int]:
        return [c.dim(n - 1), c2.dim(n), c.dim(n)]

    dims = {n: sum(parts(n)) for n in range(lo, hi + 1)}
    diff: GradedMap = {}
    endo: GradedMap = {}
    for n in range(lo, hi + 1):
        diff[n] = field.block(parts(n - 1), parts(n), {
            (0, 0): field.scale(-1, c.d(n - 1)),
            (1, 0): field.scale(-1, p.f_at(n - 1)),
            (1, 1): c2.d(n),
            (2, 0): field.identity(c.dim(n - 1)),
            (2, 2): c.d(n),
        })
        endo[n] = field.block(parts(n), parts(n), {
            (0, 0): p.source.phi(n - 1),
            (1, 0): field.scale(-1, p.F_at(n - 1)),
            (1, 1): p.target.phi(n),
            (2, 2): p.source.phi(n),
        })
    cylinder = EndoComplex(Complex(field=field, dims=dims, diff=diff), endo)
    logger.debug(f"Mapping cylinder dims {cylinder.complex.dims}")
    return cylinder


def cylinder_projection(p: HoMorphism, cylinder: Optional[EndoComplex] = None) -> HoMorphism:
    """Ho-morphism Cyl(f) -> C', (a, b, c) -> b + f c, with homotopy (a, b, c) -> F c."""
    field = p.field
    cylinder = cylinder or mapping_cylinder(p)
    c, c2 = p.source.complex, p.target.complex
    f: GradedMap = {}
    F: GradedMap = {}
    for n in cylinder.complex.degrees:
        parts = [c.dim(n - 1), c2.dim(n), c.dim(n)]
        f[n] = field.block([c2.dim(n)], parts, {(0, 1): field.identity(c2.dim(n)), (0, 2): p.f_at(n)})
        F[n] = field.block([c2.dim(n + 1)], parts, {(0, 2): p.F_at(n)})
    return HoMorphism(cylinder, p.target, f, F)


def cylinder_inclusions(p: HoMorphism, cylinder: Optional[EndoComplex] = None) -> Tuple[HoMorphism, HoMorphism]:
    """Strict inclusions C -> Cyl(f) (third summand) and C' -> Cyl(f) (second summand)."""
    field = p.field
    cylinder = cylinder or mapping_cylinder(p)
    c, c2 = p.source.complex, p.target.complex
    from_source: GradedMap = {}
    from_target: GradedMap = {}
    for n in cylinder.complex.degrees:
        parts = [c.dim(n - 1), c2.dim(n), c.dim(n)]
        from_source[n] = field.block(parts, [c.dim(n)], {(2, 0): field.identity(c.dim(n))})
        from_target[n] = field.block(parts, [c2.dim(n)], {(1, 0): field.identity(c2.dim(n))})
    return HoMorphism(p.source, cylinder, from_source), HoMorphism(p.target, cylinder, from_target)


@dataclass
class HomologyModel:
    model: EndoComplex
    morphism: HoMorphism
    report: QuasiIsoReport
    homology: HomologyData


def homology_model(x: EndoComplex) -> HomologyModel:
    """(H(C), H(phi)) with a closed quasi-isomorphic ho-morphism into (C, phi).

    f is the section of cycles -> homology; F_n solves d F_n = phi S - S H(phi).
    """
    x = x.homological()
    field = x.field
    c = x.complex
    hd = homology(c)
    h_phi = homology_endo(hd, x.endo)
    model = EndoComplex(Complex(field=field, dims=hd.dims), h_phi)
    f: GradedMap = {}
    F: GradedMap = {}
    for n in model.complex.degrees:
        section = hd.section(n)
        f[n] = section
        defect = field.sub(field.mul(x.phi(n), section), field.mul(section, h_phi[n]))
        correction = solve_matrix(field, c.d(n + 1), defect)
        if correction is None:
            raise RuntimeError(f"phi S - S H(phi) is not a boundary at degree {n}")
        F[n] = correction
    morphism = HoMorphism(model, x, f, F)
    report = is_n_quasi_iso(f, model.complex, c)
    if not report.is_quasi_iso:
        raise RuntimeError(f"homology model is not a quasi-isomorphism in degrees {report.failing_degrees}")
    logger.debug(f"Homology model dims {model.complex.dims}")
    return HomologyModel(model=model, morphism=morphism, report=report, homology=hd)
