# k3period/enumerators/fincke_pohst_enumerator.py
"""
Exact Fincke–Pohst enumeration of all vectors of a given norm.

The form is LLL-reduced first; the reduced Gram is written as
Q(y) = Σᵢ qᵢᵢ (yᵢ + Σ_{j>i} qᵢⱼ yⱼ)² with exact rational coefficients, and
coordinates are fixed depth-first from the last one inwards, each level
bounded by the budget left over from the outer levels. Children are visited
by increasing absolute value, positive first, so the output order is fixed.

With `jobs > 1` the candidate values of the outermost coordinate are split
across a process pool; the per-value results are concatenated in candidate
order, which reproduces the sequential output exactly.

Dependencies:
    - multiprocessing: Optional split of the outermost coordinate.
    - src.reduction_utils: LLL preprocessing.

Usage:
    >>> from k3period.src.lattice_utils import build_e8
    >>> from k3period.enumerators.fincke_pohst_enumerator import enumerate_norm
    >>> len(enumerate_norm(build_e8().gram, 2)[0])
    240
"""

import math
from fractions import Fraction
from multiprocessing import Pool
from typing import List, Optional, Tuple

from k3period.enumerators.base_enumerator import BaseEnumerator
from k3period.src.config_utils import get_settings
from k3period.src.linalg_utils import IntMatrix
from k3period.src.models import EnumerationStats
from k3period.src.reduction_utils import lll_reduce

Coefficients = List[List[Fraction]]


def quadratic_decomposition(gram: IntMatrix) -> Coefficients:
    """
    Exact completion of squares of a positive definite form.

    Returns:
        list[list[Fraction]]: q with q[i][i] > 0 and q[i][j] (j > i) such that
        vᵀ·G·v = Σᵢ q[i][i]·(vᵢ + Σ_{j>i} q[i][j]·vⱼ)².
    """
    n = gram.rows
    q = [[Fraction(x) for x in row] for row in gram.to_list()]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def _candidates(qii: Fraction, center: Fraction, budget: Fraction) -> List[int]:
    """Integers y with qii·(y − center)² ≤ budget, by increasing |y|, positive first."""
    if budget < 0:
        return []
    radius = math.sqrt(float(budget / qii))
    lo = math.floor(float(center) - radius) - 1
    hi = math.ceil(float(center) + radius) + 1
    values = [y for y in range(lo, hi + 1) if qii * (y - center) ** 2 <= budget]
    return sorted(values, key=lambda y: (abs(y), y < 0))


def _search_subtree(
    q: Coefficients, target: int, fixed: Tuple[int, ...]
) -> Tuple[List[Tuple[int, ...]], int]:
    """
    All solutions whose outermost coordinates equal `fixed`, in visiting order.

    Returns:
        tuple: (solutions in reduced coordinates, nodes visited).
    """
    n = len(q)
    y = [0] * n
    nodes = 0
    solutions: List[Tuple[int, ...]] = []
    budget = Fraction(target)
    for offset, value in enumerate(fixed):
        i = n - 1 - offset
        y[i] = value
        center = -sum((q[i][j] * y[j] for j in range(i + 1, n)), Fraction(0))
        budget -= q[i][i] * (value - center) ** 2
        nodes += 1
    if budget < 0:
        return solutions, nodes

    def descend(i: int, remaining: Fraction) -> None:
        nonlocal nodes
        if i < 0:
            if remaining == 0:
                solutions.append(tuple(y))
            return
        center = -sum((q[i][j] * y[j] for j in range(i + 1, n)), Fraction(0))
        for value in _candidates(q[i][i], center, remaining):
            nodes += 1
            y[i] = value
            descend(i - 1, remaining - q[i][i] * (value - center) ** 2)
        y[i] = 0

    descend(n - 1 - len(fixed), budget)
    return solutions, nodes


class FinckePohstEnumerator(BaseEnumerator):
    def __init__(self, gram: IntMatrix, target: int, jobs: Optional[int] = None):
        """
        Initializes an exact Fincke–Pohst enumerator.

        Args:
            gram (IntMatrix): Positive definite symmetric Gram matrix.
            target (int): Positive norm to enumerate.
            jobs (int, optional): Worker processes for the outermost split; defaults to settings.
        """
        super().__init__(gram, target)
        self.name = "fincke_pohst"
        self.jobs = jobs or get_settings().jobs

    def search(self) -> None:
        """
        Enumerates in LLL-reduced coordinates and maps back through the transform.

        Returns:
            None: Updates `self.vectors` (original coordinates) and `self.stats`.
        """
        n = self.gram.rows
        reduction = lll_reduce(self.gram)
        self.stats.lll_swaps = reduction.swaps
        q = quadratic_decomposition(reduction.gram)

        if self.jobs > 1 and n > 1:
            outer = _candidates(q[n - 1][n - 1], Fraction(0), Fraction(self.target))
            with Pool(processes=self.jobs) as pool:
                pending = [
                    pool.apply_async(_search_subtree, (q, self.target, (value,)))
                    for value in outer
                ]
                pool.close()
                pool.join()
            reduced: List[Tuple[int, ...]] = []
            nodes = 0
            for job in pending:
                found, visited = job.get()
                reduced.extend(found)
                nodes += visited
        else:
            reduced, nodes = _search_subtree(q, self.target, ())
        self.stats.nodes_visited = nodes

        T = reduction.transform
        self.vectors = [
            tuple(sum(y[i] * T[i, j] for i in range(n) if y[i]) for j in range(n))
            for y in reduced
        ]


def enumerate_norm(
    gram: IntMatrix, target: int, jobs: Optional[int] = None
) -> Tuple[List[Tuple[int, ...]], EnumerationStats]:
    """
    All integer vectors v with vᵀ·G·v = target, both signs, in enumeration order.

    Args:
        gram (IntMatrix): Positive definite symmetric Gram matrix.
        target (int): Positive norm.
        jobs (int, optional): Worker processes for the outermost coordinate split.

    Returns:
        tuple[list[tuple[int, ...]], EnumerationStats]: The vectors and the work counters.

    Raises:
        PreconditionError: If the form is indefinite/semidefinite or target < 1.

    Example:
        >>> enumerate_norm(IntMatrix([[2]]), 2)[0]
        [(1,), (-1,)]
    """
    enumerator = FinckePohstEnumerator(gram, target, jobs=jobs)
    enumerator.run()
    return enumerator.parse(), enumerator.stats
