# k3period/src/root_system_utils.py
"""
ADE classification of finite sets of (−2)-roots.

Given all roots of a negative definite root lattice (both signs), this module
picks a generic integer functional φ, keeps the positive roots φ(γ) > 0,
extracts the simple roots (positive roots that are not the sum of two positive
roots), builds the Dynkin graph (edge when the pairing of two simple roots is
+1 in the negative definite convention) and names every connected component
A_n, D_n, E6, E7 or E8.

The functionals are φ(γ) = Σᵢ γᵢ·bⁱ for the bases listed under
`root_system.functional_bases` in config/settings.yaml, tried in order with a
tenacity retry until one is nonzero on every root.

Dependencies:
    - tenacity: Deterministic retry over the functional bases.
    - src.models: AdeComponent.

Usage:
    >>> from k3period.src.lattice_utils import k3_lattice, u_vector
    >>> from k3period.src.root_system_utils import ade_classify
    >>> delta = u_vector(k3_lattice(), 1, 1, -1)
    >>> [str(c) for c in ade_classify([delta, -delta])]
    ['A1']
"""

import logging
from typing import Dict, List, Optional, Sequence, Set, Tuple

from tenacity import (
    RetryError,
    Retrying,
    before_sleep_log,
    retry_if_exception_type,
    stop_after_attempt,
)

from k3period.src.config_utils import get_settings
from k3period.src.errors import ClassificationError, PreconditionError
from k3period.src.lattice_utils import check_same_lattice
from k3period.src.linalg_utils import vector_form
from k3period.src.log_utils import period_logger as logger
from k3period.src.models import AdeComponent, Lattice, LatticeVector

Coords = Tuple[int, ...]

# Sorted leg lengths around the branch node of an exceptional diagram.
EXCEPTIONAL_LEGS = {(1, 2, 2): 6, (1, 2, 3): 7, (1, 2, 4): 8}
TYPE_ORDER = {"E": 0, "D": 1, "A": 2}


class FunctionalCollision(Exception):
    """A candidate functional vanishes on some root."""


def choose_functional(roots: Sequence[Coords], bases: Optional[Sequence[int]] = None) -> List[int]:
    """
    First functional (b⁰, b¹, …) from `bases` that is nonzero on every root.

    Raises:
        ClassificationError: If every configured base collides.
    """
    bases = list(bases or get_settings().functional_bases)
    n = len(roots[0]) if roots else 0
    candidates = iter(bases)

    def attempt() -> List[int]:
        base = next(candidates)
        weights = [base**i for i in range(n)]
        for root in roots:
            if sum(w * c for w, c in zip(weights, root)) == 0:
                raise FunctionalCollision(f"functional with base {base} vanishes on {root}")
        return weights

    retrying = Retrying(
        stop=stop_after_attempt(len(bases)),
        retry=retry_if_exception_type(FunctionalCollision),
        before_sleep=before_sleep_log(logger, logging.WARNING),
    )
    try:
        return retrying(attempt)
    except RetryError as e:
        logger.error(f"No admissible functional among bases {bases}")
        raise ClassificationError("no admissible functional among the configured bases") from e


def simple_roots(roots: Sequence[LatticeVector]) -> List[LatticeVector]:
    """
    Simple roots of the positive system cut out by the chosen functional.

    Args:
        roots (list[LatticeVector]): Roots of one lattice; negatives are added if missing.

    Returns:
        list[LatticeVector]: Simple roots ordered by functional value, then coordinates.
    """
    if not roots:
        return []
    lattice = check_same_lattice(*roots)
    for index, root in enumerate(roots):
        if vector_form(root.coords, lattice.gram, root.coords) != -2:
            raise PreconditionError(f"vector {index} does not have norm -2")
    closed: Set[Coords] = set()
    for root in roots:
        closed.add(tuple(root.coords))
        closed.add(tuple(-c for c in root.coords))
    ordered = sorted(closed)
    weights = choose_functional(ordered)
    height = {r: sum(w * c for w, c in zip(weights, r)) for r in ordered}
    positive = sorted((r for r in ordered if height[r] > 0), key=lambda r: (height[r], r))
    positive_set = set(positive)
    simple = []
    for alpha in positive:
        decomposable = any(
            tuple(a - b for a, b in zip(alpha, beta)) in positive_set
            for beta in positive
            if height[beta] < height[alpha]
        )
        if not decomposable:
            simple.append(LatticeVector(coords=alpha, lattice=lattice))
    return simple


def _classify_component(nodes: List[int], adjacency: Dict[int, Set[int]]) -> AdeComponent:
    """Name one connected Dynkin diagram, rejecting cycles and extra branching."""
    size = len(nodes)
    edges = sum(len(adjacency[v]) for v in nodes) // 2
    if edges != size - 1:
        raise ClassificationError("Dynkin graph contains a cycle")
    degrees = {v: len(adjacency[v]) for v in nodes}
    if max(degrees.values(), default=0) > 3:
        raise ClassificationError("Dynkin graph has a node of degree >= 4")
    branches = [v for v in nodes if degrees[v] == 3]
    if not branches:
        return AdeComponent(type="A", rank=size)
    if len(branches) > 1:
        raise ClassificationError("Dynkin graph has more than one branch node")
    center = branches[0]
    legs = []
    for start in sorted(adjacency[center]):
        length, previous, current = 1, center, start
        while degrees[current] == 2:
            current, previous = next(v for v in adjacency[current] if v != previous), current
            length += 1
        legs.append(length)
    legs = tuple(sorted(legs))
    if legs[0] == 1 and legs[1] == 1:
        return AdeComponent(type="D", rank=size)
    if legs in EXCEPTIONAL_LEGS:
        return AdeComponent(type="E", rank=EXCEPTIONAL_LEGS[legs])
    raise ClassificationError(f"Dynkin graph with legs {legs} is not of ADE type")


def dynkin_graph(simple: Sequence[LatticeVector], lattice: Lattice) -> Dict[int, Set[int]]:
    """Adjacency of the Dynkin graph on the simple roots (edge iff pairing = +1)."""
    adjacency: Dict[int, Set[int]] = {i: set() for i in range(len(simple))}
    for i in range(len(simple)):
        for j in range(i + 1, len(simple)):
            pairing = vector_form(simple[i].coords, lattice.gram, simple[j].coords)
            if pairing == 1:
                adjacency[i].add(j)
                adjacency[j].add(i)
            elif pairing != 0:
                raise ClassificationError(
                    f"simple roots {i} and {j} pair to {pairing}; not a simply-laced system"
                )
    return adjacency


def ade_classify(roots: Sequence[LatticeVector]) -> List[AdeComponent]:
    """
    ADE type of the root system spanned by `roots`.

    Args:
        roots (list[LatticeVector]): Norm −2 vectors of one lattice (signs optional).

    Returns:
        list[AdeComponent]: Components sorted E, D, A and by descending rank.

    Raises:
        PreconditionError: If a vector does not have norm −2.
        ClassificationError: If the Dynkin graph is not a disjoint union of ADE diagrams.

    Example:
        >>> [str(c) for c in ade_classify(period_check(load_named_plane("p0")).roots)]
        ['E8', 'E8', 'A1', 'A1', 'A1']
    """
    if not roots:
        return []
    lattice = check_same_lattice(*roots)
    simple = simple_roots(roots)
    adjacency = dynkin_graph(simple, lattice)

    parent = list(range(len(simple)))

    def find(i):
        if parent[i] != i:
            parent[i] = find(parent[i])
        return parent[i]

    def union(i, j):
        root_i, root_j = find(i), find(j)
        if root_i != root_j:
            parent[root_i] = root_j

    for i, neighbours in adjacency.items():
        for j in neighbours:
            union(i, j)
    groups: Dict[int, List[int]] = {}
    for i in range(len(simple)):
        groups.setdefault(find(i), []).append(i)

    components = [_classify_component(nodes, adjacency) for nodes in groups.values()]
    components.sort(key=lambda c: (TYPE_ORDER[c.type], -c.rank))
    logger.debug(
        f"Classified {len(roots)} roots: {len(simple)} simple roots, "
        f"{'+'.join(str(c) for c in components)}"
    )
    return components
