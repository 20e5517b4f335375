# k3period/src/period_utils.py
"""
Smooth-versus-orbifold decisions for period points.

This module computes the orthogonal sublattice τ^⊥ ∩ Λ of a rational positive
3-plane, enumerates every (−2)-root in it (LLL preprocessing plus exact
Fincke–Pohst on the negated restricted form), classifies the root system by
ADE type and packages the result as a `PeriodVerdict`. A plane lies in the
smooth locus T exactly when no root is orthogonal to it. Everything here is
exact; floats only appear in the enumeration timings.

Dependencies:
    - tenacity: Seeded retry loop of the smooth-plane search.
    - src.enumerators: Root enumeration.
    - src.root_system_utils: ADE classification.

Usage:
    >>> from k3period.src.grassmann_utils import load_named_plane
    >>> from k3period.src.period_utils import period_check
    >>> verdict = period_check(load_named_plane("p0"))
    >>> verdict.in_T, verdict.root_count, verdict.label
    (False, 486, '2E8+3A1')
"""

import logging
import random
from typing import Optional, Tuple

from tenacity import (
    before_sleep_log,
    retry,
    retry_if_result,
    stop_after_attempt,
)

from k3period.enumerators.fincke_pohst_enumerator import enumerate_norm
from k3period.src.errors import InternalCheckError
from k3period.src.grassmann_utils import sample_positive_plane
from k3period.src.linalg_utils import (
    IntMatrix,
    det_exact,
    int_kernel,
    primitive_rows,
    signature,
    vector_form,
)
from k3period.src.log_utils import period_logger as logger
from k3period.src.models import LatticeVector, OrthoSublattice, PeriodVerdict, PositivePlane
from k3period.src.root_system_utils import ade_classify


def plane_lattice(P: PositivePlane) -> IntMatrix:
    """
    Saturated basis of τ ∩ Λ (integer vectors in the rational span of the plane).

    Example:
        >>> plane_lattice(load_named_plane("p0")).rows
        3
    """
    B = primitive_rows(P.basis)
    complement = int_kernel(B)
    return int_kernel(complement)


def ortho_sublattice(P: PositivePlane) -> OrthoSublattice:
    """
    The sublattice τ^⊥ ∩ Λ with its restricted Gram.

    Args:
        P (PositivePlane): A rational positive plane.

    Returns:
        OrthoSublattice: Primitive basis K (rows), K·G·Kᵀ, τ ∩ Λ and the discriminant.

    Raises:
        InternalCheckError: If the restricted form is not negative definite of the
            expected rank or the two discriminants disagree in a unimodular lattice.

    Example:
        >>> ortho_sublattice(load_named_plane("p0")).rank
        19
    """
    L = P.lattice
    B = primitive_rows(P.basis)
    K = int_kernel(B @ L.gram)
    gram = K @ L.gram @ K.T
    expected = L.rank - 3
    if K.rows != expected or signature(gram) != (0, expected, 0):
        logger.error(f"Orthogonal complement has signature {signature(gram)}")
        raise InternalCheckError("orthogonal complement is not negative definite of corank 3")
    tau = plane_lattice(P)
    discriminant = abs(det_exact(gram))
    tau_discriminant = abs(det_exact(tau @ L.gram @ tau.T))
    if L.unimodular and discriminant != tau_discriminant:
        raise InternalCheckError(
            f"discriminants differ: {discriminant} (complement) vs {tau_discriminant} (plane)"
        )
    return OrthoSublattice(
        basis=K, restricted_gram=gram, plane_lattice=tau, discriminant=discriminant
    )


def period_check(
    P: PositivePlane, jobs: Optional[int] = None, heuristic: bool = False
) -> PeriodVerdict:
    """
    Decide whether P lies in the smooth locus T and classify its singularity.

    Args:
        P (PositivePlane): A rational positive plane.
        jobs (int, optional): Worker processes for the enumeration.
        heuristic (bool): Marks verdicts computed for rational approximations of float planes.

    Returns:
        PeriodVerdict: in_T, all orthogonal roots (both signs), ADE components and stats.

    Raises:
        InternalCheckError: If a returned root fails the exact re-check or the ADE
            root counts do not add up.
    """
    L = P.lattice
    ortho = ortho_sublattice(P)
    K = ortho.basis
    vectors, stats = enumerate_norm(-ortho.restricted_gram, 2, jobs=jobs)

    B = primitive_rows(P.basis)
    pairing = B @ L.gram
    roots = []
    for y in vectors:
        gamma = tuple(sum(y[i] * K[i, j] for i in range(K.rows) if y[i]) for j in range(L.rank))
        root = LatticeVector(coords=gamma, lattice=L)
        if vector_form(gamma, L.gram, gamma) != -2:
            raise InternalCheckError(f"enumerated vector {gamma} is not a root")
        if any(sum(pairing[r, j] * gamma[j] for j in range(L.rank)) for r in range(3)):
            raise InternalCheckError(f"enumerated root {gamma} is not orthogonal to the plane")
        roots.append(root)

    ade = ade_classify(roots)
    if sum(component.root_count for component in ade) != len(roots):
        raise InternalCheckError(
            f"ADE components account for {sum(c.root_count for c in ade)} roots, found {len(roots)}"
        )
    verdict = PeriodVerdict(
        in_T=not roots,
        root_count=len(roots),
        roots=roots,
        ade=ade,
        stats=stats,
        heuristic=heuristic,
    )
    logger.info(
        f"Period check: {verdict.label} ({verdict.root_count} roots, "
        f"{stats.nodes_visited} nodes, {stats.lll_swaps} LLL swaps, {stats.wall_time:.3f}s)"
    )
    return verdict


def search_smooth_plane(
    rng: random.Random, attempts: int = 20
) -> Optional[Tuple[PositivePlane, PeriodVerdict]]:
    """
    Sample random rational planes until one lies in T.

    Args:
        rng (random.Random): Seeded generator (see the `sampling.seed` setting).
        attempts (int): Maximum number of sampled planes.

    Returns:
        tuple[PositivePlane, PeriodVerdict] | None: The first smooth plane found, or None.
    """

    @retry(
        stop=stop_after_attempt(attempts),
        retry=retry_if_result(lambda outcome: not outcome[1].in_T),
        before_sleep=before_sleep_log(logger, logging.DEBUG),
        retry_error_callback=lambda retry_state: None,
    )
    def attempt() -> Tuple[PositivePlane, PeriodVerdict]:
        plane = sample_positive_plane(rng)
        return plane, period_check(plane)

    outcome = attempt()
    if outcome is None:
        logger.warning(f"No smooth plane found in {attempts} attempts")
    else:
        logger.info(
            f"Found a smooth plane (discriminant {ortho_sublattice(outcome[0]).discriminant})"
        )
    return outcome
