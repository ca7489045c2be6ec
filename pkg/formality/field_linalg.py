"""
Exact Linear Algebra

Dense matrices over the prime fields F_l and over the rationals. Residues
live in int64 arrays, rationals in object arrays of Fractions. Every
kernel, image, section and eigenspace in the toolkit comes from here, so
the pivot rule is fixed: first nonzero entry scanning columns left to
right, rows top down.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Matrix = np.ndarray
Poly = List[Scalar]

# dot products of up to 2^23 residue products stay inside int64
MAX_CHARACTERISTIC = 2**20


class FieldError(ValueError):
    """Invalid field parameters or incompatible matrices."""


class Field:
    """Arithmetic in F_l (characteristic l > 0) or in Q (characteristic 0)."""

    def __init__(self, characteristic: int):
        characteristic = int(characteristic)
        if characteristic < 0:
            raise FieldError(f"characteristic must be a prime or 0, got {characteristic}")
        if characteristic > 0 and not isprime(characteristic):
            raise FieldError(f"characteristic {characteristic} is not prime")
        if characteristic > MAX_CHARACTERISTIC:
            raise FieldError(f"characteristic {characteristic} exceeds {MAX_CHARACTERISTIC}")
        self.characteristic = characteristic

    def __repr__(self) -> str:
        return "Field(Q)" if self.is_rational else f"Field(F_{self.characteristic})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self) -> int:
        return hash(("Field", self.characteristic))

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def dtype(self):
        return object if self.is_rational else np.int64

    # -- scalars -----------------------------------------------------------

    def element(self, value: Union[int, str, Fraction]) -> Scalar:
        """Canonical form of an integer, fraction or "a/b" string."""
        if isinstance(value, (np.integer,)):
            value = int(value)
        if isinstance(value, str):
            value = Fraction(value)
        if self.is_rational:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.characteristic == 0:
                raise FieldError(f"{value} has no residue mod {self.characteristic}")
            return (value.numerator * pow(value.denominator, -1, self.characteristic)) % self.characteristic
        return int(value) % self.characteristic

    def inv(self, value: Scalar) -> Scalar:
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational:
            return 1 / Fraction(value)
        return pow(int(value), -1, self.characteristic)

    def power(self, base: Scalar, exponent: int) -> Scalar:
        if self.is_rational:
            return Fraction(base) ** exponent
        return pow(int(base), exponent, self.characteristic)

    def format(self, value: Scalar) -> Union[int, str]:
        """JSON form: residues and integral rationals as ints, others as "a/b"."""
        if self.is_rational:
            value = Fraction(value)
            return int(value) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
        return int(value)

    # -- matrices ----------------------------------------------------------

    def reduce(self, array) -> Matrix:
        if self.is_rational:
            return np.asarray(array, dtype=object)
        return np.asarray(array, dtype=np.int64) % self.characteristic

    def matrix(self, entries: Sequence, rows: Optional[int] = None, cols: Optional[int] = None) -> Matrix:
        """Build a canonical matrix from nested entries (ints, Fractions or strings)."""
        entries = list(entries)
        if rows is None:
            rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        out = self.zeros(rows, cols)
        if len(entries) != rows:
            raise FieldError(f"expected {rows} rows, got {len(entries)}")
        for i, row in enumerate(entries):
            row = list(row)
            if len(row) != cols:
                raise FieldError(f"row {i} has {len(row)} entries, expected {cols}")
            for j, value in enumerate(row):
                out[i, j] = self.element(value)
        return out

    def vector(self, entries: Sequence) -> Matrix:
        entries = list(entries)
        return self.matrix([[e] for e in entries], rows=len(entries), cols=1)[:, 0]

    def zeros(self, rows: int, cols: int) -> Matrix:
        return np.zeros((rows, cols), dtype=self.dtype)

    def identity(self, n: int) -> Matrix:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = 1
        return out

    def scalar_matrix(self, value: Scalar, n: int) -> Matrix:
        return self.reduce(self.identity(n) * self.element(value))

    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        if a.ndim == 2 and b.ndim == 2 and a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        if a.ndim == 2 and b.ndim == 1 and a.shape[1] == 0:
            return np.zeros(a.shape[0], dtype=self.dtype)
        return self.reduce(a @ b)

    def chain(self, *factors: Matrix) -> Matrix:
        out = factors[0]
        for factor in factors[1:]:
            out = self.mul(out, factor)
        return out

    def add(self, *terms: Matrix) -> Matrix:
        out = terms[0]
        for term in terms[1:]:
            out = out + term
        return self.reduce(out)

    def sub(self, a: Matrix, b: Matrix) -> Matrix:
        return self.reduce(a - b)

    def scale(self, value: Scalar, a: Matrix) -> Matrix:
        return self.reduce(a * self.element(value))

    def kron(self, a: Matrix, b: Matrix) -> Matrix:
        if 0 in a.shape or 0 in b.shape:
            return self.zeros(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
        return self.reduce(np.kron(a, b))

    def hstack(self, blocks: Sequence[Matrix], rows: int) -> Matrix:
        blocks = [self.reduce(b).reshape(rows, 1) if np.ndim(b) == 1 else self.reduce(b) for b in blocks]
        if not blocks:
            return self.zeros(rows, 0)
        return self.reduce(np.concatenate(blocks, axis=1))

    def vstack(self, blocks: Sequence[Matrix], cols: int) -> Matrix:
        blocks = [self.reduce(b).reshape(1, cols) if np.ndim(b) == 1 else self.reduce(b) for b in blocks]
        if not blocks:
            return self.zeros(0, cols)
        return self.reduce(np.concatenate(blocks, axis=0))

    def block(self, row_dims: Sequence[int], col_dims: Sequence[int], blocks: dict) -> Matrix:
        """Assemble a block matrix; `blocks` maps (i, j) to a matrix, missing blocks are zero."""
        row_off = np.concatenate([[0], np.cumsum(row_dims)]).astype(int)
        col_off = np.concatenate([[0], np.cumsum(col_dims)]).astype(int)
        out = self.zeros(int(row_off[-1]), int(col_off[-1]))
        for (i, j), value in blocks.items():
            if value.size == 0:
                continue
            out[row_off[i]:row_off[i + 1], col_off[j]:col_off[j + 1]] = value
        return self.reduce(out)


def is_zero(a: Matrix) -> bool:
    return a.size == 0 or not np.any(a != 0)


def equal(a: Matrix, b: Matrix) -> bool:
    return a.shape == b.shape and is_zero(a - b)


def rref(field: Field, a: Matrix) -> Tuple[int, List[int], Matrix]:
    """Reduced row echelon form.

    Returns:
        (rank, pivot columns, R) with the pivot columns strictly increasing
    """
    r_mat = field.reduce(np.array(a, dtype=field.dtype, copy=True))
    rows, cols = r_mat.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot_row = next((i for i in range(r, rows) if r_mat[i, c] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            r_mat[[r, pivot_row]] = r_mat[[pivot_row, r]]
        r_mat[r] = field.reduce(r_mat[r] * field.inv(r_mat[r, c]))
        for k in range(rows):
            if k != r and r_mat[k, c] != 0:
                r_mat[k] = field.reduce(r_mat[k] - r_mat[k, c] * r_mat[r])
        pivots.append(c)
        r += 1
    return r, pivots, r_mat


def rank(field: Field, a: Matrix) -> int:
    if a.size == 0:
        return 0
    return rref(field, a)[0]


def kernel_basis(field: Field, a: Matrix) -> Matrix:
    """Columns form a basis of ker a, one per free column of rref(a)."""
    cols = a.shape[1]
    if a.shape[0] == 0:
        return field.identity(cols)
    r, pivots, r_mat = rref(field, a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = field.zeros(cols, len(free))
    for k, c in enumerate(free):
        basis[c, k] = 1
        for i, p in enumerate(pivots):
            basis[p, k] = -r_mat[i, c]
    return field.reduce(basis)


def image_basis(field: Field, a: Matrix) -> Matrix:
    """Pivot columns of a, a basis of its column space."""
    if a.size == 0:
        return field.zeros(a.shape[0], 0)
    _, pivots, _ = rref(field, a)
    return field.reduce(a[:, pivots])


def solve_matrix(field: Field, a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Particular solution X of a X = b (zero on free variables), or None."""
    rows, cols = a.shape
    if rows == 0:
        return field.zeros(cols, b.shape[1] if b.ndim == 2 else 1)
    b = b.reshape(rows, -1)
    augmented = np.concatenate([field.reduce(a), field.reduce(b)], axis=1)
    r, pivots, r_mat = rref(field, augmented)
    if any(p >= cols for p in pivots):
        return None
    x = field.zeros(cols, b.shape[1])
    for i, p in enumerate(pivots):
        x[p] = r_mat[i, cols:]
    return field.reduce(x)


def solve(field: Field, a: Matrix, b: Matrix) -> Optional[Tuple[Matrix, Matrix]]:
    """Solve a x = b.

    Returns:
        (particular solution, kernel basis) or None when b is not in the image
    """
    x = solve_matrix(field, a, b.reshape(-1, 1))
    if x is None:
        return None
    return x[:, 0], kernel_basis(field, a)


def complement_columns(field: Field, span: Matrix, candidates: Matrix) -> Matrix:
    """Columns of `candidates`, in order, that extend independent `span` columns."""
    rows = span.shape[0]
    if candidates.shape[1] == 0:
        return field.zeros(rows, 0)
    joined = field.hstack([span, candidates], rows)
    _, pivots, _ = rref(field, joined)
    offset = span.shape[1]
    chosen = [p - offset for p in pivots if p >= offset]
    return field.reduce(candidates[:, chosen])


def inverse(field: Field, a: Matrix) -> Matrix:
    n, m = a.shape
    if n != m:
        raise FieldError(f"cannot invert a {n}x{m} matrix")
    x = solve_matrix(field, a, field.identity(n))
    if x is None or (n and rank(field, a) < n):
        raise FieldError("matrix is singular")
    return x


def matrix_power(field: Field, a: Matrix, exponent: int) -> Matrix:
    out = field.identity(a.shape[0])
    base = field.reduce(a)
    while exponent > 0:
        if exponent & 1:
            out = field.mul(out, base)
        base = field.mul(base, base)
        exponent >>= 1
    return out


# -- polynomials (coefficient lists, lowest degree first) -------------------

def poly_trim(field: Field, p: Poly) -> Poly:
    out = [field.element(c) for c in p]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_mul(field: Field, p: Poly, r: Poly) -> Poly:
    out = [field.element(0)] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(r):
            out[i + j] = field.element(out[i + j] + a * b)
    return poly_trim(field, out)


def poly_pow(field: Field, p: Poly, exponent: int) -> Poly:
    out: Poly = [field.element(1)]
    for _ in range(exponent):
        out = poly_mul(field, out, p)
    return out


def _poly_sub(field: Field, p: Poly, r: Poly) -> Poly:
    size = max(len(p), len(r))
    p = list(p) + [0] * (size - len(p))
    r = list(r) + [0] * (size - len(r))
    return [field.element(a - b) for a, b in zip(p, r)]


def _hessenberg(field: Field, a: Matrix) -> Matrix:
    h = field.reduce(np.array(a, dtype=field.dtype, copy=True))
    n = h.shape[0]
    for m in range(1, n - 1):
        pivot = next((i for i in range(m, n) if h[i, m - 1] != 0), None)
        if pivot is None:
            continue
        if pivot != m:
            h[[m, pivot]] = h[[pivot, m]]
            h[:, [m, pivot]] = h[:, [pivot, m]]
        t_inv = field.inv(h[m, m - 1])
        for i in range(m + 1, n):
            u = field.element(h[i, m - 1] * t_inv)
            if u != 0:
                h[i, :] = field.reduce(h[i, :] - u * h[m, :])
                h[:, m] = field.reduce(h[:, m] + u * h[:, i])
    return h


def char_poly(field: Field, a: Matrix) -> Poly:
    """Monic characteristic polynomial det(tI - a), lowest degree first.

    Faddeev-LeVerrier over Q, Hessenberg reduction over F_l.
    """
    n, m = a.shape
    if n != m:
        raise FieldError(f"char_poly needs a square matrix, got {n}x{m}")
    if field.is_rational:
        coeffs: List[Scalar] = [Fraction(0)] * n + [Fraction(1)]
        current = field.zeros(n, n)
        for k in range(1, n + 1):
            current = field.add(field.mul(a, current), field.scale(coeffs[n - k + 1], field.identity(n)))
            trace = sum(field.mul(a, current)[i, i] for i in range(n))
            coeffs[n - k] = -Fraction(trace) / k
        return coeffs

    h = _hessenberg(field, a)
    polys: List[Poly] = [[1]]
    for k in range(1, n + 1):
        p_k = poly_mul(field, [-h[k - 1, k - 1], 1], polys[k - 1])
        t = 1
        for i in range(1, k):
            t = field.element(t * h[k - i, k - i - 1])
            term = [field.element(t * h[k - i - 1, k - 1] * c) for c in polys[k - i - 1]]
            p_k = _poly_sub(field, p_k, term)
        polys.append(p_k)
    result = [field.element(c) for c in polys[n]]
    return result + [0] * (n + 1 - len(result))


def generalized_eigenspace(field: Field, a: Matrix, eigenvalue: Scalar) -> Matrix:
    """Basis of ker (a - eigenvalue I)^n; zero columns when not an eigenvalue."""
    n = a.shape[0]
    if n == 0:
        return field.zeros(0, 0)
    shifted = field.sub(a, field.scalar_matrix(eigenvalue, n))
    return kernel_basis(field, matrix_power(field, shifted, n))


def multiplicative_order(q: int, characteristic: int) -> int:
    """Least h >= 1 with q^h = 1 mod l."""
    if q % characteristic == 0:
        raise FieldError(f"{characteristic} divides {q}")
    h, value = 1, q % characteristic
    while value != 1:
        value = (value * q) % characteristic
        h += 1
    return h


def random_matrix(field: Field, rows: int, cols: int, rng: np.random.Generator, bound: int = 3) -> Matrix:
    """Uniform residues over F_l, small integers in [-bound, bound] over Q."""
    if field.is_rational:
        values = rng.integers(-bound, bound + 1, size=(rows, cols))
        return field.matrix(values.tolist(), rows, cols)
    return field.reduce(rng.integers(0, field.characteristic, size=(rows, cols)))


def random_invertible(field: Field, n: int, rng: np.random.Generator) -> Matrix:
    while True:
        candidate = random_matrix(field, n, n, rng)
        if rank(field, candidate) == n:
            return candidate
