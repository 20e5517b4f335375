# k3period/tests/test_linalg_utils.py
from fractions import Fraction
from functools import reduce
from math import gcd

import pytest

from k3period.src.errors import ExactnessError, NotUnimodularError, ShapeError
from k3period.src.lattice_utils import build_e8, build_u
from k3period.src.linalg_utils import (
    IntMatrix,
    RatMatrix,
    congruence_diagonalize,
    det_exact,
    format_rational,
    hnf,
    int_kernel,
    inv_unimodular,
    parse_rational,
    rank_exact,
    signature,
    snf,
)


def cofactor_det(rows):
    """Laplace expansion along the first row."""
    if not rows:
        return 1
    total = 0
    for j, entry in enumerate(rows[0]):
        if entry:
            minor = [row[:j] + row[j + 1:] for row in rows[1:]]
            total += (-1) ** j * entry * cofactor_det(minor)
    return total


def random_unimodular(rng, n, steps=12):
    """Product of random elementary integer row operations."""
    rows = IntMatrix.identity(n).to_list()
    if n < 2:
        return IntMatrix(rows, cols=n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        q = rng.randint(-2, 2)
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    return IntMatrix(rows, cols=n)


def is_hnf(H):
    """Row HNF shape: positive pivots, reduced entries above pivots, zero rows last."""
    last_pivot = -1
    seen_zero = False
    for i in range(H.rows):
        row = H.row(i)
        if not any(row):
            seen_zero = True
            continue
        if seen_zero:
            return False
        c = next(j for j, x in enumerate(row) if x)
        if c <= last_pivot or row[c] <= 0:
            return False
        if any(not 0 <= H[k, c] < row[c] for k in range(i)):
            return False
        last_pivot = c
    return True


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (IntMatrix.identity(8), 1),
        (IntMatrix([[0, 1], [1, 0]]), -1),
        (build_e8().gram, 1),
        (IntMatrix([[1, 2], [2, 4]]), 0),
        (RatMatrix([["1/2", 0], [0, "2/3"]]), Fraction(1, 3)),
    ],
)
def test_det_exact(matrix, expected):
    """Test exact determinants.

    Verifies that det_exact returns the exact determinant of identity, U, E8,
    a singular matrix and a rational diagonal matrix.
    """
    assert det_exact(matrix) == expected


def test_det_exact_matches_cofactor_expansion(rng):
    """Test Bareiss against cofactor expansion.

    Verifies on 1000 random matrices up to 5x5 with entries in [-3, 3] that
    the fraction-free elimination agrees with the Laplace expansion.
    """
    for _ in range(1000):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        assert det_exact(IntMatrix(rows)) == cofactor_det(rows)


def test_det_exact_rejects_rectangular():
    """Test that a non-square determinant is a shape error."""
    with pytest.raises(ShapeError):
        det_exact(IntMatrix([[1, 2, 3]]))


@pytest.mark.parametrize(
    "matrix, expected_h",
    [
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        ([[0, 1], [1, 0]], [[1, 0], [0, 1]]),
        ([[2, 0], [0, 3]], [[2, 0], [0, 3]]),
        ([[2, 4], [-3, 1]], [[1, 9], [0, 14]]),
    ],
)
def test_hnf_examples(matrix, expected_h):
    """Test Hermite normal forms of small matrices.

    Verifies the row HNF convention (positive pivots, entries above a pivot
    reduced into [0, pivot)) and that the transform satisfies U·M = H.
    """
    M = IntMatrix(matrix)
    H, U = hnf(M)
    assert H.to_list() == expected_h
    assert U @ M == H
    assert abs(det_exact(U)) == 1


def test_hnf_properties(rng):
    """Test HNF on random rectangular matrices.

    Verifies that U·M = H, |det U| = 1 and the shape predicate for 200
    random integer matrices of up to 4x6.
    """
    for _ in range(200):
        m, n = rng.randint(1, 4), rng.randint(1, 6)
        M = IntMatrix([[rng.randint(-5, 5) for _ in range(n)] for _ in range(m)])
        H, U = hnf(M)
        assert U @ M == H
        assert abs(det_exact(U)) == 1
        assert is_hnf(H)


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (IntMatrix.identity(2), (1, 1)),
        (build_u().gram, (1, 1)),
        (IntMatrix([[2, 0], [0, 4]]), (2, 4)),
        (IntMatrix([[2, 0], [0, 3]]), (1, 6)),
        (IntMatrix([[2, 4], [4, 8]]), (2, 0)),
    ],
)
def test_snf(matrix, expected):
    """Test Smith invariant factors.

    Verifies the divisibility chain d1 | d2 including the coprime merge
    (2, 3) -> (1, 6) and a trailing zero for a singular matrix.
    """
    assert snf(matrix) == expected


@pytest.mark.parametrize(
    "matrix, expected",
    [
        ([[1, 0, 0]], [[0, 1, 0], [0, 0, 1]]),
        ([[2, 2]], [[1, -1]]),
        ([[0, 0, 0]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
    ],
)
def test_int_kernel_examples(matrix, expected):
    """Test saturated integer kernels.

    Verifies that the kernel of [[2, 2]] is spanned by (1, -1), not (2, -2),
    and that a zero row has the full identity basis as kernel.
    """
    assert int_kernel(IntMatrix(matrix)).to_list() == expected


def test_int_kernel_is_saturated(rng):
    """Test kernel correctness and saturation.

    Verifies that every kernel row solves M·v = 0 and that adding a primitive
    integer solution to the kernel basis leaves its HNF unchanged.
    """
    for _ in range(100):
        m, n = rng.randint(1, 3), rng.randint(2, 6)
        M = IntMatrix([[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)])
        K = int_kernel(M)
        assert K.rows == n - rank_exact(M)
        if K.rows == 0:
            continue
        assert M @ K.T == IntMatrix.zeros(m, K.rows)
        combo = [sum(rng.randint(-3, 3) * K[i, j] for i in range(K.rows)) for j in range(n)]
        divisor = reduce(gcd, combo)
        if divisor == 0:
            continue
        primitive = [c // divisor for c in combo]
        assert M @ IntMatrix([primitive]).T == IntMatrix.zeros(m, 1)
        # the primitive solution must already lie in the span of the kernel basis
        H, _ = hnf(IntMatrix(K.to_list() + [primitive], cols=n))
        nonzero = [H.row(i) for i in range(H.rows) if any(H.row(i))]
        assert IntMatrix(nonzero, cols=n) == K


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (build_u().gram, (1, 1, 0)),
        (-build_e8().gram, (0, 8, 0)),
        (IntMatrix([[0, 0], [0, 0]]), (0, 0, 2)),
        (IntMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 0]]), (1, 1, 1)),
    ],
)
def test_signature(matrix, expected):
    """Test signatures by congruence diagonalization.

    Verifies the zero-diagonal pivot trick on U and a degenerate form.
    """
    assert signature(matrix) == expected


def test_signature_k3(k3):
    """Test that the K3 Gram matrix has signature (3, 19, 0)."""
    assert signature(k3.gram) == (3, 19, 0)


def test_congruence_diagonalize_transform(rng):
    """Test the congruence transform.

    Verifies that P·G·Pᵀ equals diag(D) exactly for random symmetric matrices,
    including zero diagonals.
    """
    for _ in range(50):
        n = rng.randint(1, 5)
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = rng.randint(-3, 3) if i != j else 2 * rng.randint(-1, 1)
        G = IntMatrix(rows)
        D, P = congruence_diagonalize(G)
        expected = RatMatrix([[D[i] if i == j else 0 for j in range(n)] for i in range(n)])
        assert P @ G @ P.T == expected


def test_signature_congruence_invariant(rng, k3):
    """Test Sylvester's law.

    Verifies that the signature of the K3 form is unchanged under congruence by
    random unimodular matrices.
    """
    for _ in range(10):
        U = random_unimodular(rng, k3.rank)
        assert signature(U @ k3.gram @ U.T) == (3, 19, 0)


@pytest.mark.parametrize(
    "matrix, expected",
    [
        ([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
        ([[0, 1], [1, 0]], [[0, 1], [1, 0]]),
        ([[1, 1], [0, 1]], [[1, -1], [0, 1]]),
    ],
)
def test_inv_unimodular(matrix, expected):
    """Test exact inversion of unimodular matrices."""
    assert inv_unimodular(IntMatrix(matrix)).to_list() == expected


def test_inv_unimodular_random(rng):
    """Test that inv_unimodular returns a two-sided inverse for random unimodular matrices."""
    for _ in range(50):
        n = rng.randint(1, 6)
        U = random_unimodular(rng, n)
        assert U @ inv_unimodular(U) == IntMatrix.identity(n)
        assert inv_unimodular(U) @ U == IntMatrix.identity(n)


def test_inv_unimodular_rejects_det_two():
    """Test that a determinant other than ±1 raises NotUnimodularError."""
    with pytest.raises(NotUnimodularError):
        inv_unimodular(IntMatrix([[2, 0], [0, 1]]))


@pytest.mark.parametrize("value", [0.5, True, "abc", "1/0"])
def test_parse_rational_rejects_inexact(value):
    """Test that floats, booleans and malformed strings are exactness errors."""
    with pytest.raises(ExactnessError):
        parse_rational(value)


def test_rational_strings():
    """Test 'p/q' parsing and formatting in lowest terms."""
    assert parse_rational("6/-4") == Fraction(-3, 2)
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert format_rational(Fraction(4)) == "4/1"


def test_ragged_matrix_rejected():
    """Test that rows of different lengths are a shape error."""
    with pytest.raises(ShapeError):
        IntMatrix([[1, 2], [3]])
