# k3period/src/reduction_utils.py
"""
Exact LLL reduction of a positive definite Gram matrix.

The reduction works on the Gram matrix directly (no embedding is needed) with
Gram–Schmidt data kept as `fractions.Fraction`, so the output transform is an
exact unimodular matrix T with T·G·Tᵀ equal to the reduced Gram.

Dependencies:
    - fractions: Exact Gram–Schmidt coefficients.

Usage:
    >>> from k3period.src.linalg_utils import IntMatrix
    >>> from k3period.src.reduction_utils import lll_reduce
    >>> lll_reduce(IntMatrix([[4, 2], [2, 4]])).gram.to_list()
    [[4, -2], [-2, 4]]
"""

from fractions import Fraction
from math import floor
from typing import List, NamedTuple, Optional, Tuple

from k3period.src.config_utils import get_settings
from k3period.src.errors import PreconditionError, ShapeError
from k3period.src.linalg_utils import IntMatrix, is_positive_definite
from k3period.src.log_utils import period_logger as logger


class Reduction(NamedTuple):
    transform: IntMatrix
    gram: IntMatrix
    swaps: int


def _gram_schmidt(G: List[List[int]]) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """Coefficients mu[i][j] (j < i) and squared lengths B[i] of the Gram–Schmidt basis."""
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            value = Fraction(G[i][j])
            for k in range(j):
                value -= mu[j][k] * mu[i][k] * B[k]
            mu[i][j] = value / B[j]
        B[i] = Fraction(G[i][i]) - sum((mu[i][k] ** 2 * B[k] for k in range(i)), Fraction(0))
    return mu, B


def _swap_update(mu: List[List[Fraction]], B: List[Fraction], k: int) -> None:
    """Update the Gram–Schmidt data in place after exchanging b_{k-1} and b_k."""
    n = len(B)
    for j in range(k - 1):
        mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
    m = mu[k][k - 1]
    length = B[k] + m * m * B[k - 1]
    mu[k][k - 1] = m * B[k - 1] / length
    B[k] = B[k - 1] * B[k] / length
    B[k - 1] = length
    for i in range(k + 1, n):
        t = mu[i][k]
        mu[i][k] = mu[i][k - 1] - m * t
        mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]


def lll_reduce(G: IntMatrix, delta: Optional[Fraction] = None) -> Reduction:
    """
    LLL-reduce the basis whose Gram matrix is G.

    Args:
        G (IntMatrix): Positive definite symmetric Gram matrix.
        delta (Fraction, optional): Lovász parameter; defaults to the configured 3/4.

    Returns:
        Reduction: (transform T, reduced Gram T·G·Tᵀ, number of swaps). T is unimodular.

    Raises:
        ShapeError: If G is not symmetric.
        PreconditionError: If G is not positive definite.

    Example:
        >>> lll_reduce(IntMatrix([[1, 0], [0, 1]])).transform.to_list()
        [[1, 0], [0, 1]]
    """
    if not G.is_symmetric():
        raise ShapeError("lll_reduce requires a symmetric Gram matrix")
    if not is_positive_definite(G):
        logger.error("lll_reduce called on a form that is not positive definite")
        raise PreconditionError("LLL reduction requires a positive definite Gram matrix")
    delta = get_settings().lll_delta if delta is None else Fraction(delta)
    n = G.rows
    gram = G.to_list()
    T = IntMatrix.identity(n).to_list()
    if n < 2:
        return Reduction(IntMatrix(T, cols=n), IntMatrix(gram, cols=n), 0)

    mu, B = _gram_schmidt(gram)
    swaps = 0
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = floor(mu[k][j] + Fraction(1, 2))
            if q == 0:
                continue
            # b_k <- b_k - q b_j
            T[k] = [a - q * b for a, b in zip(T[k], T[j])]
            gram[k] = [a - q * b for a, b in zip(gram[k], gram[j])]
            for row in gram:
                row[k] -= q * row[j]
            for i in range(j):
                mu[k][i] -= q * mu[j][i]
            mu[k][j] -= q
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
            continue
        T[k], T[k - 1] = T[k - 1], T[k]
        gram[k], gram[k - 1] = gram[k - 1], gram[k]
        for row in gram:
            row[k], row[k - 1] = row[k - 1], row[k]
        _swap_update(mu, B, k)
        swaps += 1
        k = max(k - 1, 1)

    logger.debug(f"LLL reduced rank {n} form with {swaps} swaps")
    return Reduction(IntMatrix(T, cols=n), IntMatrix(gram, cols=n), swaps)
