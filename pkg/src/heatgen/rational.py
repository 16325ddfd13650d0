"""Exact rational linear algebra on small dense matrices and tensors.

Matrices are immutable tuples of tuples of Fraction and all arithmetic is
exact.  For the tensor identity checks, which contract up to five indices,
there is an integer fast path: every tensor is rescaled by the lcm of its
entry denominators so numpy can contract int64 arrays, with an automatic
promotion to Python-int object arrays whenever a magnitude bound says int64
could overflow.  Results stay exact in both regimes.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

Matrix = tuple[tuple[Fraction, ...], ...]

# int64 contractions are kept well away from 2**63 by this guard.
_INT64_SAFE = 2**62


def rat(x) -> Fraction:
    """Coerce an int, string, or Fraction to Fraction.

    Floats are rejected on purpose: exact data must never pass through
    binary floating point.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


def matrix(rows) -> Matrix:
    """Build an immutable Fraction matrix from any nested iterable."""
    out = tuple(tuple(rat(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged rows in matrix")
    return out


def identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def zeros(r: int, c: int) -> Matrix:
    zero = Fraction(0)
    return tuple(tuple(zero for _ in range(c)) for _ in range(r))


def add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scale(a: Matrix, c: Fraction) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return sub(matmul(a, b), matmul(b, a))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def trace_product(a: Matrix, b: Matrix) -> Fraction:
    """tr(a @ b) without forming the product."""
    return sum(
        (a[i][j] * b[j][i] for i in range(len(a)) for j in range(len(b))),
        Fraction(0),
    )


def is_symmetric(a: Matrix) -> bool:
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


def is_antisymmetric(a: Matrix) -> bool:
    return all(
        a[i][j] == -a[j][i] for i in range(len(a)) for j in range(i + 1)
    )


def determinant(a: Matrix) -> Fraction:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = [list(row) for row in a]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = Fraction(0)
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_positive_definite(a: Matrix) -> bool:
    """Sylvester criterion: every leading principal minor positive."""
    n = len(a)
    return all(
        determinant(tuple(row[: k + 1] for row in a[: k + 1])) > 0
        for k in range(n)
    )


def inverse(a: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination."""
    n = len(a)
    m = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def span_decompose(
    basis: Sequence[Matrix], targets: Sequence[Matrix]
) -> tuple[int, list[tuple[Fraction, ...] | None]]:
    """Express each target matrix in the linear span of the basis matrices.

    Returns (rank of the basis, list of coefficient tuples), with None in
    place of any target that lies outside the span.  A single Gauss-Jordan
    elimination over the stacked column vectors handles every target at
    once, which keeps repeated solves against the same basis cheap.
    """
    if not basis:
        flat_ok = [all(x == 0 for row in t for x in row) for t in targets]
        return 0, [() if ok else None for ok in flat_ok]
    dim = len(basis[0]) * len(basis[0][0])
    nb = len(basis)
    cols = [
        [m[i][j] for m in basis] + [t[i][j] for t in targets]
        for i in range(len(basis[0]))
        for j in range(len(basis[0][0]))
    ]  # one row per vectorized entry
    rows = [list(map(Fraction, r)) for r in cols]
    pivots: list[tuple[int, int]] = []  # (row, basis column)
    r = 0
    for c in range(nb):
        piv = next((i for i in range(r, dim) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(dim):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
    rank = len(pivots)
    out: list[tuple[Fraction, ...] | None] = []
    for k in range(len(targets)):
        col = nb + k
        if any(rows[i][col] != 0 for i in range(rank, dim)):
            out.append(None)
            continue
        coeffs = [Fraction(0)] * nb
        for row_i, c in pivots:
            coeffs[c] = rows[row_i][col]
        out.append(tuple(coeffs))
    return rank, out


# ---------------------------------------------------------------------------
# Integer-scaled tensors for fast exact contractions.
# ---------------------------------------------------------------------------


def _flatten(nested):
    if isinstance(nested, (list, tuple)):
        for item in nested:
            yield from _flatten(item)
    else:
        yield nested


def _shape(nested) -> tuple[int, ...]:
    if isinstance(nested, (list, tuple)):
        if len(nested) == 0:
            return (0,)
        return (len(nested),) + _shape(nested[0])
    return ()


class ScaledTensor:
    """An exact rational tensor stored as integer_array / denom.

    The array dtype is int64 while magnitudes allow it and object (Python
    int) otherwise, so arithmetic never overflows silently.
    """

    __slots__ = ("array", "denom")

    def __init__(self, array: np.ndarray, denom: int):
        if denom <= 0:
            raise ValueError("denominator must be positive")
        self.array = array
        self.denom = denom

    @classmethod
    def from_nested(cls, nested) -> "ScaledTensor":
        shape = _shape(nested)
        vals = [rat(x) for x in _flatten(nested)]
        den = 1
        for v in vals:
            den = lcm(den, v.denominator)
        ints = [int(v * den) for v in vals]
        big = max((abs(i) for i in ints), default=0)
        dtype = np.int64 if big < _INT64_SAFE else object
        arr = np.empty(len(ints), dtype=dtype)
        arr[:] = ints
        return cls(arr.reshape(shape) if shape else arr.reshape(()), den)

    def _max_abs(self) -> int:
        if self.array.size == 0:
            return 0
        if self.array.dtype == object:
            return max(abs(int(x)) for x in self.array.ravel())
        return int(np.abs(self.array).max())

    def to_fractions(self):
        den = self.denom

        def conv(a):
            # Iterating an object array yields plain ints, not 0-d arrays.
            if isinstance(a, np.ndarray) and a.ndim:
                return tuple(conv(x) for x in a)
            return Fraction(int(a), den)

        return conv(self.array)

    def is_zero(self) -> bool:
        if self.array.size == 0:
            return True
        if self.array.dtype == object:
            return all(int(x) == 0 for x in self.array.ravel())
        return not self.array.any()

    def equals(self, other: "ScaledTensor") -> bool:
        """Exact comparison: cross-multiply the denominators."""
        if self.array.shape != other.array.shape:
            return False
        if self.array.size == 0:
            return True
        a, b = self.array, other.array
        bound = max(self._max_abs() * other.denom,
                    other._max_abs() * self.denom)
        if (a.dtype == object or b.dtype == object or bound >= _INT64_SAFE):
            a = a.astype(object)
            b = b.astype(object)
        return bool(np.array_equal(a * other.denom, b * self.denom))


def exact_einsum(subscripts: str, *operands: ScaledTensor) -> ScaledTensor:
    """np.einsum over ScaledTensors, promoting to object dtype when an
    int64 result could overflow."""
    arrays = [op.array for op in operands]
    denom = 1
    for op in operands:
        denom *= op.denom
    # Conservative magnitude bound: product of entry maxima times the
    # total number of summed terms.
    bound = 1
    for op in operands:
        bound *= max(op._max_abs(), 1)
    in_specs = subscripts.split("->")[0].split(",")
    out_spec = subscripts.split("->")[1] if "->" in subscripts else ""
    sizes: dict[str, int] = {}
    for spec, arr in zip(in_specs, arrays):
        for ch, dim in zip(spec, arr.shape):
            sizes[ch] = dim
    for ch, dim in sizes.items():
        if ch not in out_spec:
            bound *= max(dim, 1)
    if bound >= _INT64_SAFE or any(a.dtype == object for a in arrays):
        arrays = [a.astype(object) for a in arrays]
    result = np.einsum(subscripts, *arrays)
    return ScaledTensor(np.asarray(result), denom)
