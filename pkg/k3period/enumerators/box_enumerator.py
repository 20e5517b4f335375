# k3period/enumerators/box_enumerator.py
"""
Naive box enumeration used as an oracle for the Fincke–Pohst enumerator.

Every v with vᵀ·G·v = t satisfies |vᵢ| ≤ ⌊√(t·(G⁻¹)ᵢᵢ)⌋ (Cauchy–Schwarz in
the dual form), so scanning that box is complete. Only practical for small
ranks; `box_size()` lets callers decide before running.
"""

import itertools
from math import isqrt, prod
from typing import List

from k3period.enumerators.base_enumerator import BaseEnumerator
from k3period.src.linalg_utils import IntMatrix, inverse_rational, vector_form


class BoxEnumerator(BaseEnumerator):
    def __init__(self, gram: IntMatrix, target: int):
        super().__init__(gram, target)
        self.name = "box"

    def bounds(self) -> List[int]:
        """Per-coordinate bounds ⌊√(t·(G⁻¹)ᵢᵢ)⌋."""
        inverse = inverse_rational(self.gram)
        return [isqrt(int(self.target * inverse[i, i])) for i in range(self.gram.rows)]

    def box_size(self) -> int:
        return prod(2 * b + 1 for b in self.bounds())

    def search(self) -> None:
        ranges = [range(-b, b + 1) for b in self.bounds()]
        for v in itertools.product(*ranges):
            self.stats.nodes_visited += 1
            if vector_form(v, self.gram, v) == self.target:
                self.vectors.append(tuple(v))
