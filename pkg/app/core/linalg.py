"""Exact linear algebra over a Field on numpy object arrays.

Matrices are 2-d ``dtype=object`` arrays whose entries belong to one Field.
Zero-sized dimensions are legal everywhere.
"""

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.field import Field, QQ_FIELD

logger = logging.getLogger(__name__)


class LinalgError(Exception):
    pass


def matmul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise LinalgError(f"Cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return field.zeros((a.shape[0], b.shape[1]))
    return a @ b


def chain(field: Field, factors: Sequence[np.ndarray], size: int) -> np.ndarray:
    """Product of ``factors`` left to right; the identity of ``size`` when empty."""
    result = field.eye(size)
    for f in factors:
        result = matmul(field, result, f)
    return result


def is_zero(a: np.ndarray) -> bool:
    return all(x == 0 for x in a.flat)


def rref(field: Field, a: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    m = field.coerce(a)
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot_row = next((i for i in range(r, rows) if m[i, c] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[[r, pivot_row]] = m[[pivot_row, r]]
        m[r] = m[r] * (field.one / m[r, c])
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[r] * m[i, c]
        pivots.append(c)
        r += 1
    return m, tuple(pivots)


def rank(field: Field, a: np.ndarray) -> int:
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    return len(rref(field, a)[1])


def kernel_basis(field: Field, a: np.ndarray) -> List[np.ndarray]:
    """Basis of the right null space {x : a·x = 0}."""
    cols = a.shape[1]
    reduced, pivots = rref(field, a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.full(cols, field.zero, dtype=object)
        v[f] = field.one
        for row, p in enumerate(pivots):
            v[p] = -reduced[row, f]
        basis.append(v)
    return basis


def left_kernel_basis(field: Field, a: np.ndarray) -> List[np.ndarray]:
    """Basis of {x : x·a = 0}, the kernel of the row-vector action."""
    return kernel_basis(field, a.T)


def solve(field: Field, a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """One solution of a·x = b, or None when the system is inconsistent."""
    rows, cols = a.shape
    if len(b) != rows:
        raise LinalgError(f"Right-hand side of length {len(b)} for {rows} equations")
    augmented = field.zeros((rows, cols + 1))
    augmented[:, :cols] = field.coerce(a)
    augmented[:, cols] = field.coerce(np.asarray(b, dtype=object))
    reduced, pivots = rref(field, augmented)
    if cols in pivots:
        return None
    x = np.full(cols, field.zero, dtype=object)
    for row, p in enumerate(pivots):
        x[p] = reduced[row, cols]
    return x


def row_basis(field: Field, vectors: Sequence[np.ndarray], width: int) -> np.ndarray:
    """Rows forming a basis of the span of ``vectors``."""
    if not vectors:
        return field.zeros((0, width))
    stacked = np.vstack([np.asarray(v, dtype=object).reshape(1, width) for v in vectors])
    reduced, pivots = rref(field, stacked)
    return reduced[: len(pivots)]


def extend_to_complement(field: Field, base: np.ndarray, candidates: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Pick candidates that are independent modulo the row span of ``base``."""
    width = base.shape[1]
    current = [row for row in base]
    current_rank = rank(field, base) if base.shape[0] else 0
    chosen = []
    for v in candidates:
        trial = np.vstack([np.asarray(r, dtype=object).reshape(1, width) for r in current + [v]])
        r = rank(field, trial)
        if r > current_rank:
            current.append(v)
            current_rank = r
            chosen.append(v)
    return chosen


def coordinates(field: Field, basis_rows: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Matrix X with X·basis_rows = vectors; the rows of ``vectors`` must lie in the span."""
    k = basis_rows.shape[0]
    out = field.zeros((vectors.shape[0], k))
    for i, row in enumerate(vectors):
        x = solve(field, basis_rows.T, row)
        if x is None:
            raise LinalgError("Vector does not lie in the span of the given basis")
        out[i] = x
    return out


def block_diag(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = field.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]))
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def sandwich(field: Field, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Coefficient block of X ↦ left·X·right on row-major flattened X.

    Row (r, c) of the output and column (i, j) of the unknown carry
    left[r, i] * right[j, c].
    """
    lr, lc = left.shape
    rr, rc = right.shape
    out = field.zeros((lr * rc, lc * rr))
    if out.size == 0:
        return out
    right_t = right.T
    for r in range(lr):
        for i in range(lc):
            coeff = left[r, i]
            if coeff != 0:
                out[r * rc:(r + 1) * rc, i * rr:(i + 1) * rr] = right_t * coeff
    return out


def integer_nullvector(m: Sequence[Sequence[int]]) -> List[int]:
    """Primitive nonzero integer vector z with m·z = 0 (first nonzero entry positive)."""
    a = QQ_FIELD.matrix(m) if len(m) else QQ_FIELD.zeros((0, 0))
    basis = kernel_basis(QQ_FIELD, a)
    if not basis:
        raise LinalgError(f"Null space of the {a.shape[0]}x{a.shape[1]} matrix is trivial")
    v = basis[0]
    lcm = reduce(lambda x, y: x * y // gcd(x, y), (Fraction(x).denominator for x in v), 1)
    ints = [int(Fraction(x) * lcm) for x in v]
    content = reduce(gcd, (abs(x) for x in ints), 0)
    ints = [x // content for x in ints]
    first = next(x for x in ints if x != 0)
    if first < 0:
        ints = [-x for x in ints]
    return ints


@dataclass
class LinearSystem:
    """Homogeneous system Σ coeff · L · X_var · R = 0 over named matrix unknowns.

    Unknowns are flattened row-major in registration order; every call to
    ``add_equation`` contributes one block of rows.
    """

    field: Field
    shapes: Dict[str, Tuple[int, int]] = dc_field(default_factory=dict)
    offsets: Dict[str, int] = dc_field(default_factory=dict)
    blocks: List[List[Tuple[str, np.ndarray]]] = dc_field(default_factory=list)
    size: int = 0

    def add_unknown(self, name: str, shape: Tuple[int, int]) -> None:
        if name in self.shapes:
            raise LinalgError(f"Unknown {name} registered twice")
        self.shapes[name] = shape
        self.offsets[name] = self.size
        self.size += shape[0] * shape[1]

    def add_equation(self, terms: Sequence[Tuple[object, np.ndarray, str, np.ndarray]]) -> None:
        block = []
        for coeff, left, name, right in terms:
            if name not in self.shapes:
                raise LinalgError(f"Unknown {name} was never registered")
            rows, cols = self.shapes[name]
            if left.shape[1] != rows or right.shape[0] != cols:
                raise LinalgError(
                    f"Term for {name} has factors {left.shape} and {right.shape}, unknown is {rows}x{cols}"
                )
            coeff = self.field.convert(coeff)
            block.append((name, sandwich(self.field, left, right) * coeff))
        heights = {m.shape[0] for _, m in block}
        if len(heights) > 1:
            raise LinalgError(f"Equation terms disagree on output size: {sorted(heights)}")
        self.blocks.append(block)

    def matrix(self) -> np.ndarray:
        heights = [block[0][1].shape[0] if block else 0 for block in self.blocks]
        out = self.field.zeros((sum(heights), self.size))
        row = 0
        for height, block in zip(heights, self.blocks):
            for name, m in block:
                start = self.offsets[name]
                width = m.shape[1]
                out[row:row + height, start:start + width] = out[row:row + height, start:start + width] + m
            row += height
        return out

    def solution_space(self) -> List[np.ndarray]:
        return kernel_basis(self.field, self.matrix())

    def unpack(self, vector: np.ndarray) -> Dict[str, np.ndarray]:
        out = {}
        for name, (rows, cols) in self.shapes.items():
            start = self.offsets[name]
            out[name] = np.array(vector[start:start + rows * cols], dtype=object).reshape(rows, cols)
        return out

    def pack(self, values: Dict[str, np.ndarray]) -> np.ndarray:
        vec = np.full(self.size, self.field.zero, dtype=object)
        for name, (rows, cols) in self.shapes.items():
            start = self.offsets[name]
            vec[start:start + rows * cols] = np.asarray(values[name], dtype=object).reshape(-1)
        return vec


def invert(field: Field, a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise LinalgError(f"Only square matrices are invertible, got {a.shape}")
    augmented = field.zeros((n, 2 * n))
    augmented[:, :n] = field.coerce(a)
    augmented[:, n:] = field.eye(n)
    reduced, pivots = rref(field, augmented)
    if pivots[:n] != tuple(range(n)):
        raise LinalgError(f"Matrix of size {n} is singular")
    return reduced[:, n:]
