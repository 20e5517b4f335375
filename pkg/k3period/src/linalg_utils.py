# k3period/src/linalg_utils.py
"""
Exact integer and rational matrix kernel.

This module provides the immutable matrix carriers `IntMatrix` and `RatMatrix`
(numpy object arrays of Python ints / `fractions.Fraction`, so no entry is ever
rounded) and the exact algorithms the rest of the toolkit is built on:
Bareiss determinants, row Hermite normal form with its unimodular transform,
Smith invariant factors, saturated integer kernels, congruence
diagonalization (signatures by Sylvester's law) and unimodular inversion.

HNF convention: row style, pivots positive, entries above a pivot reduced into
[0, pivot), zero rows at the bottom.

Dependencies:
    - numpy: Object-dtype arrays for exact products and transposes.
    - fractions: Exact rationals.

Usage:
    >>> from k3period.src.linalg_utils import IntMatrix, det_exact, signature
    >>> det_exact(IntMatrix([[0, 1], [1, 0]]))
    -1
    >>> signature(IntMatrix([[0, 1], [1, 0]]))
    (1, 1, 0)
"""

from fractions import Fraction
from math import gcd
from numbers import Integral, Rational
from typing import List, Sequence, Tuple, Union

import numpy as np

from k3period.src.errors import (
    ExactnessError,
    NotUnimodularError,
    PreconditionError,
    ShapeError,
)


def parse_rational(value) -> Fraction:
    """
    Convert an int, Fraction or 'p/q' string into a Fraction.

    Floats are rejected: a float is not an exact rational input.

    Raises:
        ExactnessError: For floats, booleans and unparseable strings.
    """
    if isinstance(value, bool):
        raise ExactnessError(f"boolean {value!r} is not a rational entry")
    if isinstance(value, (Integral, Fraction)):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ExactnessError(f"cannot parse rational '{value}': {e}") from e
    raise ExactnessError(
        f"entry {value!r} of type {type(value).__name__} is not an exact rational"
    )


def parse_integer(value) -> int:
    """Convert an integral value (int, integral Fraction, integer string) into an int."""
    q = parse_rational(value)
    if q.denominator != 1:
        raise ExactnessError(f"entry {value!r} is not an integer")
    return int(q.numerator)


def format_rational(q: Fraction) -> str:
    """Serialize a rational as 'p/q' with q > 0 in lowest terms."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class _ExactMatrix:
    """Shared immutable storage for exact matrices."""

    __slots__ = ("_data",)

    @staticmethod
    def _coerce(value):
        raise NotImplementedError

    def __init__(self, entries, cols: int = None):
        if isinstance(entries, _ExactMatrix):
            entries = entries.to_list()
        rows = [list(row) for row in entries]
        if not rows:
            data = np.empty((0, cols or 0), dtype=object)
        else:
            width = len(rows[0])
            if any(len(row) != width for row in rows):
                raise ShapeError("matrix rows have different lengths")
            if cols is not None and width != cols:
                raise ShapeError(f"expected {cols} columns, got {width}")
            data = np.empty((len(rows), width), dtype=object)
            for i, row in enumerate(rows):
                for j, value in enumerate(row):
                    data[i, j] = self._coerce(value)
        data.setflags(write=False)
        self._data = data

    @classmethod
    def _wrap(cls, array: np.ndarray):
        obj = cls.__new__(cls)
        array = np.array(array, dtype=object)
        if array.ndim != 2:
            raise ShapeError("expected a 2-D array")
        array.setflags(write=False)
        obj._data = array
        return obj

    @classmethod
    def identity(cls, n: int):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._data.shape

    @property
    def array(self) -> np.ndarray:
        """Read-only object array view."""
        return self._data

    @property
    def T(self):
        return self._wrap(self._data.T)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and bool(np.array_equal(self._data, self._data.T))

    def row(self, i: int) -> tuple:
        return tuple(self._data[i])

    def to_list(self) -> List[list]:
        return [list(row) for row in self._data]

    def to_float(self) -> np.ndarray:
        return np.array(
            [[float(x) for x in row] for row in self._data], dtype=float
        ).reshape(self.shape)

    def __getitem__(self, index):
        return self._data[index]

    def __eq__(self, other) -> bool:
        if not isinstance(other, _ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self.shape, tuple(self._data.flat)))

    def __neg__(self):
        return self._wrap(-self._data)

    def _result_type(self, other):
        if isinstance(self, RatMatrix) or isinstance(other, RatMatrix):
            return RatMatrix
        return IntMatrix

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return self._result_type(other)._wrap(self._data + other._data)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {other.shape} from {self.shape}")
        return self._result_type(other)._wrap(self._data - other._data)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        result_cls = self._result_type(other)
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return result_cls.zeros(self.rows, other.cols)
        return result_cls._wrap(self._data.dot(other._data))

    def scale(self, factor):
        """Multiply every entry by an exact scalar."""
        cls = RatMatrix if isinstance(factor, Fraction) and factor.denominator != 1 else type(self)
        return cls._wrap(self._data * factor)

    def __repr__(self):
        return f"{type(self).__name__}({self.to_list()})"


class IntMatrix(_ExactMatrix):
    """Immutable matrix of arbitrary-precision integers."""

    __slots__ = ()

    @staticmethod
    def _coerce(value):
        return parse_integer(value)


class RatMatrix(_ExactMatrix):
    """Immutable matrix of reduced fractions (positive denominators)."""

    __slots__ = ()

    @staticmethod
    def _coerce(value):
        return parse_rational(value)

    @classmethod
    def _wrap(cls, array: np.ndarray):
        array = np.array(array, dtype=object)
        if array.size:
            array = np.vectorize(Fraction, otypes=[object])(array)
        return super()._wrap(array)

    def to_strings(self) -> List[List[str]]:
        return [[format_rational(x) for x in row] for row in self._data]


AnyMatrix = Union[IntMatrix, RatMatrix]


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a // b
    return Fraction(a) / b


def _require_square(M: _ExactMatrix, what: str) -> None:
    if not M.is_square():
        raise ShapeError(f"{what} requires a square matrix, got {M.shape}")


def block_diagonal(*blocks: _ExactMatrix) -> IntMatrix:
    """Block-diagonal integer matrix with the given square blocks."""
    size = sum(block.rows for block in blocks)
    rows = [[0] * size for _ in range(size)]
    offset = 0
    for block in blocks:
        _require_square(block, "block_diagonal")
        for i in range(block.rows):
            for j in range(block.cols):
                rows[offset + i][offset + j] = block[i, j]
        offset += block.rows
    return IntMatrix(rows, cols=size)


def det_exact(M: _ExactMatrix):
    """
    Exact determinant by fraction-free (Bareiss) elimination with row pivoting.

    Args:
        M (IntMatrix | RatMatrix): A square matrix.

    Returns:
        int | Fraction: The determinant (an int for integer input).

    Raises:
        ShapeError: If M is not square.

    Example:
        >>> det_exact(IntMatrix([[0, 1], [1, 0]]))
        -1
    """
    _require_square(M, "det_exact")
    n = M.rows
    if n == 0:
        return 1
    A = M.to_list()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = _exact_div(A[i][j] * A[k][k] - A[i][k] * A[k][j], prev)
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def is_positive_definite(G: _ExactMatrix) -> bool:
    """
    Exact positive definiteness of a symmetric matrix by leading principal minors.

    Bareiss elimination without pivoting: the k-th pivot is the k-th leading
    principal minor, so the test stops at the first non-positive one.
    """
    _require_square(G, "is_positive_definite")
    if not G.is_symmetric():
        raise ShapeError("is_positive_definite requires a symmetric matrix")
    n = G.rows
    A = G.to_list()
    prev = 1
    for k in range(n):
        if A[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = _exact_div(A[i][j] * A[k][k] - A[i][k] * A[k][j], prev)
        prev = A[k][k]
    return True


def hnf(M: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """
    Row Hermite normal form with its unimodular transform.

    Args:
        M (IntMatrix): Any integer matrix.

    Returns:
        tuple[IntMatrix, IntMatrix]: (H, U) with U·M = H, |det U| = 1, pivots
        positive, entries above each pivot in [0, pivot), zero rows last.

    Example:
        >>> H, U = hnf(IntMatrix([[0, 1], [1, 0]]))
        >>> H.to_list()
        [[1, 0], [0, 1]]
    """
    m, n = M.shape
    A = M.to_list()
    U = IntMatrix.identity(m).to_list()

    def combine(target, source, q):
        A[target] = [a - q * b for a, b in zip(A[target], A[source])]
        U[target] = [a - q * b for a, b in zip(U[target], U[source])]

    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nonzero = [i for i in range(r, m) if A[i][c] != 0]
            if not nonzero:
                break
            p = min(nonzero, key=lambda i: (abs(A[i][c]), i))
            if p != r:
                A[p], A[r] = A[r], A[p]
                U[p], U[r] = U[r], U[p]
            cleared = True
            for i in range(r + 1, m):
                if A[i][c] != 0:
                    combine(i, r, A[i][c] // A[r][c])
                    if A[i][c] != 0:
                        cleared = False
            if cleared:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                combine(i, r, q)
        r += 1
    return IntMatrix(A, cols=n), IntMatrix(U, cols=m)


def rank_exact(M: _ExactMatrix) -> int:
    """Exact rank by rational Gaussian elimination."""
    A = [[Fraction(x) for x in row] for row in M.to_list()]
    rank = 0
    for c in range(M.cols):
        pivot = next((i for i in range(rank, M.rows) if A[i][c] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        for i in range(rank + 1, M.rows):
            if A[i][c] != 0:
                f = A[i][c] / A[rank][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank


def snf(M: IntMatrix) -> Tuple[int, ...]:
    """
    Smith invariant factors d1 | d2 | ... (nonnegative, zeros last).

    Args:
        M (IntMatrix): Any integer matrix.

    Returns:
        tuple[int, ...]: min(rows, cols) invariant factors.

    Example:
        >>> snf(IntMatrix([[2, 0], [0, 4]]))
        (2, 4)
    """
    m, n = M.shape
    A = M.to_list()
    size = min(m, n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]

    factors = []
    for t in range(size):
        candidates = [
            (abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]
        ]
        if not candidates:
            break
        _, i, j = min(candidates)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            for i in range(t + 1, m):
                q = A[i][t] // A[t][t]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
            for j in range(t + 1, n):
                q = A[t][j] // A[t][t]
                if q:
                    for row in A:
                        row[j] -= q * row[t]
            remainders = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            remainders += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if remainders:
                _, i, j = min(remainders)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            offender = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if A[i][j] % A[t][t]
                ),
                None,
            )
            if offender is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[offender])]
        factors.append(abs(A[t][t]))
    return tuple(factors + [0] * (size - len(factors)))


def int_kernel(M: IntMatrix) -> IntMatrix:
    """
    Saturated basis of the integer solutions of M·v = 0.

    The rows of the unimodular HNF transform of Mᵀ that map to zero rows span
    the full integer kernel; the basis is returned in Hermite normal form.

    Args:
        M (IntMatrix): An m×n integer matrix.

    Returns:
        IntMatrix: k×n matrix whose rows are a basis of {v ∈ ℤⁿ : M·v = 0}.

    Example:
        >>> int_kernel(IntMatrix([[2, 2]])).to_list()
        [[1, -1]]
    """
    n = M.cols
    H, U = hnf(M.T)
    rank = sum(1 for i in range(H.rows) if any(H.row(i)))
    kernel_rows = [U.row(i) for i in range(rank, n)]
    if not kernel_rows:
        return IntMatrix([], cols=n)
    basis, _ = hnf(IntMatrix(kernel_rows, cols=n))
    return basis


def congruence_diagonalize(G: _ExactMatrix) -> Tuple[Tuple[Fraction, ...], RatMatrix]:
    """
    Exact congruence diagonalization of a symmetric matrix.

    A zero diagonal entry is first replaced by a later nonzero diagonal entry
    (swap); if none exists, a row/column with a nonzero off-diagonal pairing is
    added to create one.

    Args:
        G (IntMatrix | RatMatrix): A symmetric matrix.

    Returns:
        tuple: (D, P) with P·G·Pᵀ = diag(D), P rational and invertible.

    Raises:
        ShapeError: If G is not symmetric.
    """
    if not G.is_symmetric():
        raise ShapeError("congruence diagonalization requires a symmetric matrix")
    n = G.rows
    A = [[Fraction(x) for x in row] for row in G.to_list()]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        P[i], P[j] = P[j], P[i]

    def add_multiple(target, source, f):
        # basis change e_target <- e_target + f * e_source
        A[target] = [a + f * b for a, b in zip(A[target], A[source])]
        for row in A:
            row[target] += f * row[source]
        P[target] = [a + f * b for a, b in zip(P[target], P[source])]

    diagonal = []
    for i in range(n):
        if A[i][i] == 0:
            j = next((j for j in range(i + 1, n) if A[j][j] != 0), None)
            if j is not None:
                swap(i, j)
            else:
                j = next((j for j in range(i + 1, n) if A[i][j] != 0), None)
                if j is not None:
                    add_multiple(i, j, Fraction(1))
        if A[i][i] != 0:
            for j in range(i + 1, n):
                if A[j][i] != 0:
                    add_multiple(j, i, -A[j][i] / A[i][i])
        diagonal.append(A[i][i])
    return tuple(diagonal), RatMatrix(P, cols=n)


def signature(G: _ExactMatrix) -> Tuple[int, int, int]:
    """
    Signature (p, n, z) of a symmetric matrix by Sylvester's law of inertia.

    Example:
        >>> signature(IntMatrix([[0, 1], [1, 0]]))
        (1, 1, 0)
    """
    diagonal, _ = congruence_diagonalize(G)
    p = sum(1 for d in diagonal if d > 0)
    n = sum(1 for d in diagonal if d < 0)
    return p, n, len(diagonal) - p - n


def inverse_rational(M: _ExactMatrix) -> RatMatrix:
    """Gauss–Jordan inverse of a nonsingular square matrix over ℚ."""
    _require_square(M, "inverse_rational")
    n = M.rows
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M.to_list())]
    for c in range(n):
        pivot = next((i for i in range(c, n) if A[i][c] != 0), None)
        if pivot is None:
            raise PreconditionError("matrix is singular")
        A[c], A[pivot] = A[pivot], A[c]
        inv = 1 / A[c][c]
        A[c] = [a * inv for a in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return RatMatrix([row[n:] for row in A], cols=n)


def inv_unimodular(M: IntMatrix) -> IntMatrix:
    """
    Exact integer inverse of a unimodular matrix.

    The HNF of a unimodular matrix is the identity, so its transform is the inverse.

    Raises:
        ShapeError: If M is not square.
        NotUnimodularError: If |det M| != 1.

    Example:
        >>> inv_unimodular(IntMatrix([[1, 1], [0, 1]])).to_list()
        [[1, -1], [0, 1]]
    """
    _require_square(M, "inv_unimodular")
    det = det_exact(M)
    if abs(det) != 1:
        raise NotUnimodularError(f"determinant {det} is not ±1")
    _, U = hnf(M)
    return U


def primitive_rows(R: _ExactMatrix) -> IntMatrix:
    """Scale each rational row to a primitive integer row (same direction, gcd 1)."""
    rows = []
    for row in R.to_list():
        fractions_row = [Fraction(x) for x in row]
        denominator = 1
        for q in fractions_row:
            denominator = denominator * q.denominator // gcd(denominator, q.denominator)
        ints = [int(q * denominator) for q in fractions_row]
        g = 0
        for value in ints:
            g = gcd(g, value)
        rows.append([value // g for value in ints] if g else ints)
    return IntMatrix(rows, cols=R.cols)


def vector_form(u: Sequence, G: _ExactMatrix, v: Sequence):
    """Exact bilinear pairing uᵀ·G·v of two coordinate sequences."""
    total = 0
    for i, ui in enumerate(u):
        if ui == 0:
            continue
        row = G[i]
        total += ui * sum(row[j] * vj for j, vj in enumerate(v) if vj != 0)
    return total
