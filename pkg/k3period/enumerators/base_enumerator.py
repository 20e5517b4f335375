# k3period/enumerators/base_enumerator.py
"""
Base enumerator for integer vectors of a fixed norm in a positive definite form.

This module defines a `BaseEnumerator` class that owns the life cycle shared by
all enumerators: precondition checks on the Gram matrix and target, timing and
work counters (`EnumerationStats`), an exact re-check of every emitted
vector, and logging. Subclasses implement `search()`, which fills
`self.vectors` with coordinate tuples in a deterministic order.

Dependencies:
    - src.linalg_utils: For exact positivity tests and pairings.
    - src.models: For EnumerationStats.

Usage:
    >>> from k3period.enumerators.fincke_pohst_enumerator import FinckePohstEnumerator
    >>> enumerator = FinckePohstEnumerator(IntMatrix([[2]]), 2)
    >>> enumerator.run()
    >>> enumerator.parse()
    [(1,), (-1,)]
"""

import time
from typing import List, Tuple

from k3period.src.errors import InternalCheckError, PreconditionError, ShapeError
from k3period.src.linalg_utils import IntMatrix, is_positive_definite, vector_form
from k3period.src.log_utils import period_logger
from k3period.src.models import EnumerationStats


class BaseEnumerator:
    def __init__(self, gram: IntMatrix, target: int):
        """
        Initializes an enumerator for {v ∈ ℤⁿ : vᵀ·G·v = target}.

        Args:
            gram (IntMatrix): Positive definite symmetric Gram matrix.
            target (int): Positive norm to enumerate.

        Attributes:
            gram (IntMatrix): The form.
            target (int): The norm.
            vectors (list[tuple[int, ...]]): Results of the last run.
            stats (EnumerationStats): Counters of the last run.
            name (str): Enumerator name used in log messages (overridden by subclasses).
        """
        self.gram = gram
        self.target = target
        self.vectors: List[Tuple[int, ...]] = []
        self.stats = EnumerationStats()
        self.name = "base"
        self.logger = period_logger

    def validate(self) -> None:
        """
        Checks the preconditions of an enumeration.

        Raises:
            ShapeError: If the Gram matrix is not symmetric.
            PreconditionError: If the form is not positive definite or the target is < 1.
        """
        if not self.gram.is_symmetric():
            raise ShapeError("enumeration requires a symmetric Gram matrix")
        if self.target < 1:
            raise PreconditionError(f"target norm must be positive, got {self.target}")
        if not is_positive_definite(self.gram):
            self.logger.error(f"{self.name}: form is not positive definite")
            raise PreconditionError("enumeration requires a positive definite form")

    def search(self) -> None:
        """Fills `self.vectors` and the work counters of `self.stats`."""
        raise NotImplementedError

    def verify(self) -> None:
        """Exact re-check of every emitted vector."""
        for v in self.vectors:
            if vector_form(v, self.gram, v) != self.target:
                raise InternalCheckError(f"{self.name}: vector {v} has the wrong norm")
        if len(set(self.vectors)) != len(self.vectors):
            raise InternalCheckError(f"{self.name}: duplicate vectors in the output")

    def run(self) -> None:
        """
        Validates the input, runs the search and verifies its output.

        Returns:
            None: Updates `self.vectors` and `self.stats`.
        """
        self.validate()
        self.vectors = []
        self.stats = EnumerationStats()
        started = time.perf_counter()
        self.search()
        self.verify()
        self.stats.wall_time = time.perf_counter() - started
        self.logger.info(
            f"{self.name}: {len(self.vectors)} vectors of norm {self.target} in rank "
            f"{self.gram.rows} ({self.stats.nodes_visited} nodes, "
            f"{self.stats.lll_swaps} LLL swaps, {self.stats.wall_time:.3f}s)"
        )

    def parse(self) -> List[Tuple[int, ...]]:
        """Returns the vectors collected by run()."""
        return self.vectors
