"""
Example Inputs

Built-in weighted inputs: projective spaces, the multiplicative group,
Arnold algebras of configuration spaces, and seeded random pure and
Tate instances for property checks.

Weights over F_l follow the Tate convention (Frobenius eigenvalue q^k has
weight k mod h). Over Q the Weil convention doubles them and weights are
integers, so the advertised alpha doubles too.
"""

import itertools
import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, model_validator
from sympy import primitive_root

from .complexes import Complex, EndoComplex, Variance
from .config import FieldConfig, config
from .dga import (
    BasisElement,
    MasseyVanishing,
    WeightedDGA,
    dga_purity_check,
    monomial_algebra,
    rebase,
    tensor_dga,
    vanishing_predicate,
)
from .errors import InputError
from .field_linalg import Matrix, inverse, random_invertible, random_matrix
from .weights import (
    GradedComplex,
    WeightGrading,
    formality_degree,
    order_of_q,
    parse_alpha,
    purity_check,
)

logger = logging.getLogger(__name__)

GeneratorKind = Literal["projective", "gm", "configuration", "random_pure", "random_pure_dga", "random_tate"]


class GeneratorSpec(BaseModel):
    """Parameters of a built-in input; only the fields of the chosen kind are used."""
    kind: GeneratorKind
    n: int = Field(default=2, description="Complex dimension of P^n")
    points: int = Field(default=3, description="Number of points of the configuration space")
    d: int = Field(default=1, description="Configuration space of C^d")
    seed: int = Field(default=0, description="Seed for random kinds")
    alpha: str = Field(default="1/2", description="Slope of the diagonal for random pure kinds")
    modulus: Optional[int] = Field(default=None, description="Weight modulus for random pure kinds")
    normalization: Literal["tate", "weil"] = Field(default="tate", description="Weights of G_m")
    contaminate: bool = Field(default=False, description="Plant a non-Tate block in random_tate")
    field: FieldConfig = Field(default_factory=lambda: config.field)

    @model_validator(mode="after")
    def _check_ranges(self):
        if self.kind == "projective" and self.n < 1:
            raise ValueError("projective space needs n >= 1")
        if self.kind == "configuration" and (self.points < 2 or self.d < 1):
            raise ValueError("configuration spaces need points >= 2 and d >= 1")
        if self.kind in ("random_pure", "random_pure_dga"):
            parse_alpha(self.alpha)
        if self.kind == "random_tate" and self.field.is_rational:
            raise ValueError("random Tate complexes need a finite field")
        return self


@dataclass
class GeneratedInput:
    """A generated object together with the alpha and modulus it is pure for."""
    kind: str
    alpha: Fraction
    modulus: Optional[int]
    algebra: Optional[WeightedDGA] = None
    endo: Optional[Matrix] = None                 # algebra endomorphism (Frobenius model)
    complex: Optional[EndoComplex] = None
    graded: Optional[GradedComplex] = None
    planted: Dict[int, Dict[int, int]] = dataclass_field(default_factory=dict)
    description: str = ""


@dataclass
class RandomTate:
    complex: EndoComplex
    planted: Dict[int, Dict[int, int]]   # degree -> weight -> dimension
    contaminated: bool = False


def _modulus(cfg: FieldConfig) -> Optional[int]:
    return None if cfg.is_rational else order_of_q(cfg)


def _diagonal_endo(cfg: FieldConfig, a: WeightedDGA, eigenvalue) -> Matrix:
    """phi acting on each basis element e by eigenvalue(e)."""
    field = cfg.field
    phi = field.zeros(a.dim, a.dim)
    for i, b in enumerate(a.basis):
        phi[i, i] = field.element(eigenvalue(b))
    return field.reduce(phi)


# -- named families -------------------------------------------------------------

def projective_space(n: int, cfg: Optional[FieldConfig] = None) -> GeneratedInput:
    """H^*(P^n) = k[x]/x^{n+1} with |x| = 2 and Frobenius q^i on x^i.

    Over F_l the weight of x is 1 mod h (alpha = 1/2); over Q it is 2 (alpha = 1).
    """
    cfg = cfg or config.field
    if n < 1:
        raise InputError(f"projective space needs n >= 1, got {n}")
    modulus = _modulus(cfg)
    weight = 2 if cfg.is_rational else 1
    a = monomial_algebra(cfg, [("x", 2, weight)], degree_cap=2 * n, modulus=modulus)
    phi = _diagonal_endo(cfg, a, lambda b: cfg.field.power(cfg.q, b.degree // 2))
    alpha = Fraction(1) if cfg.is_rational else Fraction(1, 2)
    logger.info(f"✅ Generated P^{n} over {cfg.describe()}")
    return GeneratedInput(
        kind="projective", alpha=alpha, modulus=modulus, algebra=a, endo=phi,
        complex=a.dual_endo_complex(phi), description=f"P^{n}",
    )


def gm(cfg: Optional[FieldConfig] = None, normalization: str = "tate") -> GeneratedInput:
    """H^*(G_m): a unit and one class t in degree 1.

    Tate normalization over F_l: t has weight 1 and Frobenius q (alpha = 1).
    Weil normalization: t has weight 2 (alpha = 2), so Frobenius acts by q^2
    over F_l and by q over Q. Over Q only the Weil normalization exists.
    """
    cfg = cfg or config.field
    if normalization not in ("tate", "weil"):
        raise InputError(f"unknown normalization {normalization!r}")
    if cfg.is_rational:
        normalization = "weil"
    weight = 1 if normalization == "tate" else 2
    modulus = _modulus(cfg)
    a = monomial_algebra(cfg, [("t", 1, weight)], degree_cap=1, modulus=modulus)
    frobenius = cfg.q if cfg.is_rational else cfg.field.power(cfg.q, weight)
    phi = _diagonal_endo(cfg, a, lambda b: cfg.field.power(frobenius, b.degree))
    return GeneratedInput(
        kind="gm", alpha=Fraction(weight), modulus=modulus, algebra=a, endo=phi,
        complex=a.dual_endo_complex(phi), description=f"G_m ({normalization} weights)",
    )


# -- Arnold algebras --------------------------------------------------------------

Pair = Tuple[int, int]
Monomial = Tuple[Pair, ...]


def _arnold_normal_form(monomial: Monomial) -> Dict[Monomial, int]:
    """Rewrite a product of odd generators w_ij (i < j) in the basis with increasing j.

    Uses anticommutativity, w^2 = 0 and w_ak w_bk = w_ab w_bk - w_ab w_ak for a < b < k.
    """
    word = list(monomial)
    sign = 1
    for i in range(len(word)):
        for j in range(len(word) - 1 - i):
            if (word[j][1], word[j][0]) > (word[j + 1][1], word[j + 1][0]):
                word[j], word[j + 1] = word[j + 1], word[j]
                sign = -sign
    for s in range(len(word) - 1):
        if word[s] == word[s + 1]:
            return {}
        (a, k), (b, k2) = word[s], word[s + 1]
        if k == k2:
            out: Dict[Monomial, int] = {}
            head, tail = tuple(word[:s]), tuple(word[s + 2:])
            for coefficient, replacement in ((1, ((a, b), (b, k))), (-1, ((a, b), (a, k)))):
                for normal, value in _arnold_normal_form(head + replacement + tail).items():
                    out[normal] = out.get(normal, 0) + sign * coefficient * value
            return {m: c for m, c in out.items() if c}
    return {tuple(word): sign}


def arnold_basis(points: int) -> List[Monomial]:
    """Monomials w_{i_1 j_1} ... w_{i_k j_k} with j_1 < ... < j_k."""
    choices = [[None] + [(i, j) for i in range(1, j)] for j in range(2, points + 1)]
    basis = [tuple(p for p in combo if p is not None) for combo in itertools.product(*choices)]
    return sorted(basis, key=lambda m: (len(m), [(p[1], p[0]) for p in m]))


def configuration_arnold(points: int, d: int, cfg: Optional[FieldConfig] = None) -> GeneratedInput:
    """H^*(F_points(C^d)): generators w_ij of degree 2d - 1 with the Arnold relations, d = 0.

    The degree (2d-1)k piece has weight dk mod h over F_l (alpha = d/(2d-1)) and 2dk over Q.
    """
    cfg = cfg or config.field
    if points < 2 or d < 1:
        raise InputError(f"configuration spaces need points >= 2 and d >= 1, got {points}, {d}")
    field = cfg.field
    modulus = _modulus(cfg)
    scale = 2 if cfg.is_rational else 1
    monomials = arnold_basis(points)
    position = {m: i for i, m in enumerate(monomials)}
    dim = len(monomials)

    def label(m: Monomial) -> str:
        return "*".join(f"w{i}_{j}" for i, j in m) if m else "1"

    basis = [BasisElement(label(m), (2 * d - 1) * len(m), scale * d * len(m)) for m in monomials]
    mult = np.zeros((dim, dim, dim), dtype=field.dtype)
    for i, u in enumerate(monomials):
        for j, v in enumerate(monomials):
            for normal, coefficient in _arnold_normal_form(u + v).items():
                mult[i, j, position[normal]] = field.element(coefficient)
    a = WeightedDGA(cfg, modulus, basis, mult, field.zeros(dim, dim), unit=0)
    phi = _diagonal_endo(cfg, a, lambda b: field.power(cfg.q, d * (b.degree // (2 * d - 1))))
    alpha = Fraction(scale * d, 2 * d - 1)
    logger.info(f"✅ Generated Arnold algebra of F_{points}(C^{d}) with dimension {dim}")
    return GeneratedInput(
        kind="configuration", alpha=alpha, modulus=modulus, algebra=a, endo=phi,
        complex=a.dual_endo_complex(phi), description=f"F_{points}(C^{d})",
    )


def arnold_poincare(points: int) -> List[int]:
    """Coefficients of prod_{i=1}^{points-1} (1 + i t)."""
    coefficients = [1]
    for i in range(1, points):
        coefficients = [a + i * b for a, b in zip(coefficients + [0], [0] + coefficients)]
    return coefficients


def primitive_root_config(characteristic: int) -> FieldConfig:
    """F_l with q a primitive root, so h = l - 1."""
    return FieldConfig(characteristic=characteristic, q=int(primitive_root(characteristic)))


def configuration_formality_degree(d: int, characteristic: int) -> int:
    """N = floor((l - 2)(2d - 1) / d) for q a primitive root mod l."""
    return formality_degree(Fraction(d, 2 * d - 1), characteristic - 1)


def configuration_fully_formal(points: int, d: int, characteristic: int) -> bool:
    """Cohomology lives in degrees <= (points - 1)(2d - 1) <= N exactly when (points - 1) d <= l - 2."""
    return (points - 1) * d <= characteristic - 2


def configuration_massey_vanishing(characteristic: int, k: int) -> bool:
    """k-fold Massey products of F_m(C) vanish when (k - 2)/(l - 1) is not an integer; l >= k suffices."""
    return k >= 3 and vanishing_predicate(Fraction(1), characteristic - 1, k) is MasseyVanishing.FORCED


# -- random instances ------------------------------------------------------------

def _random_weight(rng: np.random.Generator, modulus: Optional[int], bound: int) -> int:
    return int(rng.integers(0, modulus)) if modulus is not None else int(rng.integers(0, bound + 1))


def random_pure(seed: int, alpha, modulus: Optional[int], cfg: Optional[FieldConfig] = None,
                max_degree: Optional[int] = None, max_block: Optional[int] = None,
                max_pairs: Optional[int] = None) -> GeneratedInput:
    """Homological weighted complex whose homology sits on the alpha-diagonal.

    Homology blocks are planted on the diagonal, acyclic pairs b -> c of a common
    weight are added anywhere, and every degree is then written in a random basis.
    """
    cfg = cfg or config.field
    alpha = parse_alpha(alpha)
    max_degree = config.random.max_degree if max_degree is None else max_degree
    max_block = config.random.max_block if max_block is None else max_block
    max_pairs = config.random.max_pairs if max_pairs is None else max_pairs
    field = cfg.field
    rng = np.random.default_rng(seed)

    cells: Dict[int, List[int]] = {n: [] for n in range(max_degree + 1)}   # weights per basis vector
    planted: Dict[int, Dict[int, int]] = {}
    for n in range(max_degree + 1):
        diagonal = alpha * n
        if diagonal.denominator == 1:
            size = int(rng.integers(0, max_block + 1))
            p = int(diagonal) if modulus is None else int(diagonal) % modulus
            cells[n].extend([p] * size)
            if size:
                planted.setdefault(n, {})[p] = size
    pairs = []
    for _ in range(int(rng.integers(0, max_pairs + 1))):
        n = int(rng.integers(0, max_degree))
        p = _random_weight(rng, modulus, int(alpha * max_degree) + 2)
        pairs.append((n, len(cells[n + 1]), len(cells[n])))
        cells[n + 1].append(p)
        cells[n].append(p)

    dims = {n: len(w) for n, w in cells.items() if w}
    diff = {n: field.zeros(len(cells.get(n - 1, [])), len(cells[n])) for n in dims if n - 1 in dims}
    for n, source, target in pairs:
        diff[n + 1][target, source] = 1
    change = {n: random_invertible(field, size, rng) for n, size in dims.items()}
    conjugated = {
        n: field.chain(change[n - 1], matrix, inverse(field, change[n]))
        for n, matrix in diff.items()
    }
    complex_ = Complex(field=field, dims=dims, diff=conjugated, variance=Variance.HOMOLOGICAL)
    splitting = {}
    for n, weights in cells.items():
        if not weights:
            continue
        pieces = []
        for p in sorted(set(weights)):
            columns = [i for i, w in enumerate(weights) if w == p]
            pieces.append((p, change[n][:, columns]))
        splitting[n] = pieces
    graded = GradedComplex(complex_, WeightGrading(modulus, splitting))
    report = purity_check(graded, alpha)
    if not report.is_pure:
        raise RuntimeError(f"random pure complex is impure: {report.error_message}")
    logger.debug(f"random_pure seed {seed}: dims {dims}")
    return GeneratedInput(
        kind="random_pure", alpha=alpha, modulus=modulus, graded=graded, planted=planted,
        description=f"random pure complex (seed {seed})",
    )


def random_pure_dga(seed: int, alpha, modulus: Optional[int], cfg: Optional[FieldConfig] = None,
                    degree_cap: int = 6) -> GeneratedInput:
    """Simply connected alpha-pure dg-algebra with a non-zero differential.

    A truncated free algebra on diagonal generators is tensored with the acyclic
    algebra <1, e, de> (e in degree >= 2, any weight) and rewritten in a random
    homogeneous basis.
    """
    cfg = cfg or config.field
    alpha = parse_alpha(alpha)
    field = cfg.field
    rng = np.random.default_rng(seed)
    diagonal_degrees = [n for n in range(2, degree_cap + 1) if (alpha * n).denominator == 1]
    if not diagonal_degrees:
        raise InputError(f"alpha = {alpha} has no integral diagonal point in degrees 2..{degree_cap}")
    count = int(rng.integers(1, 3))
    generators = []
    for g in range(count):
        n = int(rng.choice(diagonal_degrees))
        generators.append((f"y{g}", n, int(alpha * n)))
    base = monomial_algebra(cfg, generators, degree_cap=degree_cap, modulus=modulus)
    e_degree = int(rng.integers(2, max(3, degree_cap - 1)))
    e_weight = _random_weight(rng, modulus, int(alpha * degree_cap) + 2)
    acyclic = monomial_algebra(
        cfg, [("e", e_degree, e_weight), ("f", e_degree + 1, e_weight)], {"e": [(1, "f")]},
        modulus=modulus, allowed=["e", "f"],
    )
    product = tensor_dga(base, acyclic)
    change = field.zeros(product.dim, product.dim)
    for (n, p), idx in product.pieces().items():
        block = field.identity(len(idx)) if product.unit in idx else random_invertible(field, len(idx), rng)
        change[np.ix_(idx, idx)] = block
    a = rebase(product, change)
    report = dga_purity_check(a, alpha)
    if not report.is_pure:
        raise RuntimeError(f"random pure dg-algebra is impure: {report.error_message}")
    return GeneratedInput(
        kind="random_pure_dga", alpha=alpha, modulus=modulus, algebra=a,
        description=f"random pure dg-algebra (seed {seed})",
    )


def _non_tate_block(cfg: FieldConfig) -> Matrix:
    """Companion matrix of an irreducible quadratic, or of a non-power of q when one exists."""
    field = cfg.field
    ell = cfg.characteristic
    powers = {field.power(cfg.q, k) for k in range(cfg.h)}
    for value in range(1, ell):
        if value not in powers:
            return field.matrix([[value]])
    for c, e in itertools.product(range(ell), range(1, ell)):
        if all((x * x - c * x - e) % ell for x in range(ell)):
            return field.matrix([[0, e], [1, c]])
    raise InputError(f"no non-Tate block over F_{ell}")


def random_tate(seed: int, cfg: Optional[FieldConfig] = None, max_degree: Optional[int] = None,
                max_block: Optional[int] = None, max_pairs: Optional[int] = None,
                contaminate: bool = False) -> RandomTate:
    """Homological complex with a Tate endomorphism made of planted q^k-unipotent blocks.

    Homology blocks and acyclic pairs (the same block on both ends of an identity
    differential) are conjugated by random invertible matrices degree by degree.
    """
    cfg = cfg or config.field
    if cfg.is_rational:
        raise InputError("random Tate complexes need a finite field")
    max_degree = config.random.max_degree if max_degree is None else max_degree
    max_block = config.random.max_block if max_block is None else max_block
    max_pairs = config.random.max_pairs if max_pairs is None else max_pairs
    field = cfg.field
    h = cfg.h
    rng = np.random.default_rng(seed)

    def unipotent_block(k: int, size: int) -> Matrix:
        block = field.scalar_matrix(field.power(cfg.q, k), size)
        strict = np.triu(random_matrix(field, size, size, rng), 1)
        return field.add(block, strict)

    blocks: Dict[int, List[Matrix]] = {n: [] for n in range(max_degree + 1)}
    planted: Dict[int, Dict[int, int]] = {}
    edges = []   # (source degree, source offset block index, target block index)

    def plant(n: int, k: int, size: int):
        planted.setdefault(n, {})
        planted[n][k] = planted[n].get(k, 0) + size

    for n in range(max_degree + 1):
        for _ in range(int(rng.integers(0, max_block + 1))):
            k, size = int(rng.integers(0, h)), int(rng.integers(1, max_block + 1))
            blocks[n].append(unipotent_block(k, size))
            plant(n, k, size)
    for _ in range(int(rng.integers(0, max_pairs + 1))):
        if max_degree < 1:
            break
        n = int(rng.integers(1, max_degree + 1))
        k, size = int(rng.integers(0, h)), int(rng.integers(1, max_block + 1))
        block = unipotent_block(k, size)
        edges.append((n, len(blocks[n]), len(blocks[n - 1])))
        blocks[n].append(block)
        blocks[n - 1].append(block.copy())
        plant(n, k, size)
        plant(n - 1, k, size)
    if contaminate:
        blocks[0].append(_non_tate_block(cfg))

    def offsets(n: int) -> List[int]:
        return list(np.cumsum([0] + [b.shape[0] for b in blocks[n]]).astype(int))

    dims = {n: sum(b.shape[0] for b in bs) for n, bs in blocks.items() if bs}
    endo = {}
    for n in dims:
        total, start = field.zeros(dims[n], dims[n]), 0
        for b in blocks[n]:
            total[start:start + b.shape[0], start:start + b.shape[0]] = b
            start += b.shape[0]
        endo[n] = total
    diff = {n: field.zeros(dims[n - 1], dims[n]) for n in dims if n - 1 in dims}
    for n, source, target in edges:
        so, to = offsets(n)[source], offsets(n - 1)[target]
        size = blocks[n][source].shape[0]
        diff[n][to:to + size, so:so + size] = field.identity(size)

    change = {n: random_invertible(field, size, rng) for n, size in dims.items()}
    back = {n: inverse(field, t) for n, t in change.items()}
    complex_ = Complex(
        field=field, dims=dims,
        diff={n: field.chain(change[n - 1], m, back[n]) for n, m in diff.items()},
        variance=Variance.HOMOLOGICAL,
    )
    x = EndoComplex(complex_, {n: field.chain(change[n], m, back[n]) for n, m in endo.items()})
    logger.debug(f"random_tate seed {seed}: planted {planted}")
    return RandomTate(complex=x, planted=planted, contaminated=contaminate)


def generate(spec: GeneratorSpec) -> GeneratedInput:
    """Dispatch on spec.kind."""
    cfg = spec.field
    if spec.kind == "projective":
        return projective_space(spec.n, cfg)
    if spec.kind == "gm":
        return gm(cfg, spec.normalization)
    if spec.kind == "configuration":
        return configuration_arnold(spec.points, spec.d, cfg)
    if spec.kind == "random_pure":
        return random_pure(spec.seed, spec.alpha, spec.modulus, cfg)
    if spec.kind == "random_pure_dga":
        return random_pure_dga(spec.seed, spec.alpha, spec.modulus, cfg)
    tate = random_tate(spec.seed, cfg, contaminate=spec.contaminate)
    return GeneratedInput(
        kind="random_tate", alpha=Fraction(1), modulus=cfg.h, complex=tate.complex,
        planted=tate.planted, description=f"random Tate complex (seed {spec.seed})",
    )
