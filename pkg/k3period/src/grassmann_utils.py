# k3period/src/grassmann_utils.py
"""
Positive 3-planes in the K3 lattice tensored with ℝ (period points).

This module validates rational plane bases exactly, builds form-orthonormal
frames, compares planes with and without orientation, applies isometries and
computes the O(3,19)-invariant distance of the symmetric space
O(3,19)/SO(3)×O(19) through hyperbolic principal angles.

Exact/float boundary: validation, projectors and the 3×3 data behind the
distance are exact rationals; frames, projector comparisons and the final
angles are floating point.

Distance: with A_P = B_P·G·B_Pᵀ, A_Q likewise and C = B_P·G·B_Qᵀ, the matrix
S = C·A_Q⁻¹·Cᵀ − A_P is formed exactly; the generalized eigenvalues of
(S, A_P) are sinh²θᵢ, so θᵢ = arcsinh(√·). This agrees with arccosh of the
singular values of E_P·G·E_Qᵀ and is exactly zero on equal planes.

Dependencies:
    - numpy: Float frames and comparisons.
    - scipy: Cholesky factors and the generalized symmetric eigenproblem.

Usage:
    >>> from k3period.src.grassmann_utils import load_named_plane, distance
    >>> round(distance(load_named_plane("p0"), load_named_plane("p1")).value, 6)
    0.346574
"""

import json
import random
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg as sla

from k3period.src.config_utils import PLANES_PATH, get_settings, load_registry
from k3period.src.errors import (
    DegenerateBasisError,
    ExactnessError,
    InternalCheckError,
    LatticeMismatchError,
    NotPositiveError,
    PreconditionError,
    ShapeError,
)
from k3period.src.lattice_utils import U_OFFSET, k3_lattice
from k3period.src.linalg_utils import (
    IntMatrix,
    RatMatrix,
    det_exact,
    inverse_rational,
    is_positive_definite,
    rank_exact,
)
from k3period.src.log_utils import grassmann_logger as logger
from k3period.src.models import Isometry, Lattice, PlaneDistance, PlaneFile, PositivePlane


def _check_same(P: PositivePlane, Q: PositivePlane) -> Lattice:
    if not P.lattice.same_as(Q.lattice):
        logger.error("Planes live in different lattices")
        raise LatticeMismatchError("planes belong to different lattices")
    return P.lattice


def plane_from_basis(
    basis, lattice: Optional[Lattice] = None, oriented: bool = True
) -> PositivePlane:
    """
    Validate a rational 3×n basis and wrap it as a PositivePlane.

    Args:
        basis (RatMatrix | IntMatrix | list): Rows spanning the plane.
        lattice (Lattice, optional): Ambient lattice. Defaults to the K3 lattice.
        oriented (bool): Whether the row order carries an orientation.

    Returns:
        PositivePlane: The validated plane.

    Raises:
        ShapeError: If the basis is not 3×rank.
        DegenerateBasisError: If the rows are linearly dependent.
        NotPositiveError: If B·G·Bᵀ is not positive definite.
    """
    L = lattice or k3_lattice()
    B = basis if isinstance(basis, RatMatrix) else RatMatrix(
        basis.to_list() if isinstance(basis, IntMatrix) else basis
    )
    if B.rows != 3 or B.cols != L.rank:
        raise ShapeError(f"plane basis must be 3x{L.rank}, got {B.shape}")
    if rank_exact(B) < 3:
        raise DegenerateBasisError("plane basis rows are linearly dependent")
    if not is_positive_definite(B @ L.gram @ B.T):
        raise NotPositiveError("restricted form on the plane is not positive definite")
    return PositivePlane(basis=B, oriented=oriented, lattice=L)


def plane_from_floats(
    rows: Sequence[Sequence[float]],
    denominator: int,
    lattice: Optional[Lattice] = None,
    oriented: bool = True,
) -> PositivePlane:
    """
    Nearest rational plane with entries of denominator at most `denominator`.

    Heuristic: the roots of the approximation need not be the roots of the
    real plane.
    """
    if denominator < 1:
        raise PreconditionError("heuristic denominator must be at least 1")
    approx = [
        [Fraction(value).limit_denominator(denominator) for value in row] for row in rows
    ]
    logger.info(f"Approximated float plane with denominators <= {denominator}")
    return plane_from_basis(approx, lattice=lattice, oriented=oriented)


def restricted_gram(P: PositivePlane) -> RatMatrix:
    """The exact 3×3 Gram B·G·Bᵀ of the plane basis."""
    return P.basis @ P.lattice.gram @ P.basis.T


def orthonormalize(P: PositivePlane) -> np.ndarray:
    """
    Form-orthonormal frame E = L⁻¹·B with L the Cholesky factor of B·G·Bᵀ.

    Returns:
        np.ndarray: 3×n float matrix with E·G·Eᵀ = I₃ and the same row span.

    Raises:
        InternalCheckError: If the frame is still off by more than the
            general tolerance after one refinement step.
    """
    settings = get_settings()
    G = P.lattice.gram.to_float()
    A = restricted_gram(P).to_float()
    factor = sla.cholesky(A, lower=True)
    E = sla.solve_triangular(factor, P.basis.to_float(), lower=True)
    deviation = np.abs(E @ G @ E.T - np.eye(3)).max()
    if deviation > settings.orthonormal_tolerance:
        # one Cholesky pass on E·G·Eᵀ ≈ I₃
        factor = sla.cholesky(E @ G @ E.T, lower=True)
        E = sla.solve_triangular(factor, E, lower=True)
        deviation = np.abs(E @ G @ E.T - np.eye(3)).max()
    if deviation > settings.tolerance:
        logger.error(f"Frame deviates from orthonormal by {deviation:.3e}")
        raise InternalCheckError(f"orthonormal frame off by {deviation:.3e}")
    if deviation > settings.orthonormal_tolerance:
        logger.warning(f"Frame deviates from orthonormal by {deviation:.3e} after refinement")
    return E


def projector(P: PositivePlane) -> RatMatrix:
    """
    Exact form-projector Π = Bᵀ·(B·G·Bᵀ)⁻¹·B·G onto the plane.

    Π is idempotent with trace 3 and depends only on the span.
    """
    A_inv = inverse_rational(restricted_gram(P))
    return (P.basis.T @ A_inv) @ (P.basis @ P.lattice.gram)


def planes_equal(P: PositivePlane, Q: PositivePlane, tol: Optional[float] = None) -> bool:
    """
    Unoriented equality: the projectors agree entrywise within `tol`.

    Example:
        >>> planes_equal(load_named_plane("p0"), load_named_plane("p1"))
        False
    """
    _check_same(P, Q)
    tol = get_settings().tolerance if tol is None else tol
    diff = projector(P).to_float() - projector(Q).to_float()
    return bool(np.abs(diff).max() <= tol)


def frame_orientation(P: PositivePlane, Q: PositivePlane) -> int:
    """Sign of det(B_P·G·B_Qᵀ): +1 when the stored frames induce the same orientation."""
    _check_same(P, Q)
    det = det_exact(P.basis @ P.lattice.gram @ Q.basis.T)
    return (det > 0) - (det < 0)


def oriented_equal(P: PositivePlane, Q: PositivePlane, tol: Optional[float] = None) -> bool:
    """
    Oriented equality: unoriented equality plus a positive frame determinant.

    Falls back to unoriented equality when either plane is unoriented.
    """
    if not planes_equal(P, Q, tol):
        return False
    if not (P.oriented and Q.oriented):
        return True
    return frame_orientation(P, Q) > 0


def forget_orientation(P: PositivePlane) -> PositivePlane:
    """The same plane with its orientation flag cleared."""
    return P.model_copy(update={"oriented": False})


def apply(g: Isometry, P: PositivePlane) -> PositivePlane:
    """
    Image of P under g (rows mapped by g, orientation flag kept).

    Raises:
        LatticeMismatchError: If g and P act on different lattices.
    """
    if not g.lattice.same_as(P.lattice):
        logger.error("Isometry and plane live in different lattices")
        raise LatticeMismatchError("isometry and plane belong to different lattices")
    return plane_from_basis(P.basis @ g.matrix.T, lattice=P.lattice, oriented=P.oriented)


def distance(P: PositivePlane, Q: PositivePlane) -> PlaneDistance:
    """
    Symmetric-space distance through hyperbolic principal angles.

    Args:
        P (PositivePlane): First plane.
        Q (PositivePlane): Second plane.

    Returns:
        PlaneDistance: value = ‖θ‖₂ with θ the angles, sorted descending.

    Raises:
        InternalCheckError: If a generalized eigenvalue is negative beyond the clamp tolerance.

    Example:
        >>> round(distance(load_named_plane("p0"), load_named_plane("p1")).value, 6)
        0.346574
    """
    L = _check_same(P, Q)
    settings = get_settings()
    A_P = restricted_gram(P)
    A_Q = restricted_gram(Q)
    C = P.basis @ L.gram @ Q.basis.T
    S = C @ inverse_rational(A_Q) @ C.T - A_P
    mu = sla.eigh(S.to_float(), A_P.to_float(), eigvals_only=True)
    if mu.min() < -settings.clamp_tolerance:
        logger.error(f"Negative sinh^2 eigenvalue {mu.min():.3e}")
        raise InternalCheckError(f"negative generalized eigenvalue {mu.min():.3e}")
    angles = sorted((float(np.arcsinh(np.sqrt(max(m, 0.0)))) for m in mu), reverse=True)
    value = float(np.sqrt(sum(angle * angle for angle in angles)))
    return PlaneDistance(value=value, hyperbolic_angles=tuple(angles))


def chart_dimension(lattice: Optional[Lattice] = None) -> int:
    """Dimension p·q of the Grassmannian of positive p-planes in signature (p, q)."""
    p, q, _ = (lattice or k3_lattice()).signature
    return p * q


def sample_positive_plane(
    rng: random.Random,
    lattice: Optional[Lattice] = None,
    entry_bound: Optional[int] = None,
) -> PositivePlane:
    """
    Random rational positive plane.

    Rows have entries in [−b, b]; row i is pushed towards the positive cone by
    adding k·(e_i + f_i), with k doubled until the restricted form is positive
    definite.
    """
    L = lattice or k3_lattice()
    bound = entry_bound or get_settings().entry_bound
    rows = [[rng.randint(-bound, bound) for _ in range(L.rank)] for _ in range(3)]
    k = 1
    while True:
        pushed = [list(row) for row in rows]
        for i, row in enumerate(pushed):
            row[U_OFFSET + 2 * i] += k
            row[U_OFFSET + 2 * i + 1] += k
        B = RatMatrix(pushed, cols=L.rank)
        if rank_exact(B) == 3 and is_positive_definite(B @ L.gram @ B.T):
            return PositivePlane(basis=B, oriented=True, lattice=L)
        k *= 2


def _planes_registry() -> dict:
    return {entry["name"]: entry for entry in load_registry(PLANES_PATH, "planes")}


def named_planes() -> List[str]:
    return list(_planes_registry())


def load_named_plane(name: str, lattice: Optional[Lattice] = None) -> PositivePlane:
    """
    A plane from config/planes.yaml (p0, p1, smooth).

    Raises:
        PreconditionError: Unknown plane name.
    """
    entry = _planes_registry().get(name)
    if entry is None:
        raise PreconditionError(f"unknown named plane '{name}'")
    return plane_from_basis(
        entry["basis"], lattice=lattice, oriented=entry.get("oriented", True)
    )


def plane_from_document(
    document: PlaneFile,
    lattice: Optional[Lattice] = None,
    heuristic_denominator: Optional[int] = None,
) -> Tuple[PositivePlane, bool]:
    """
    Build a plane from a parsed plane document.

    Returns:
        tuple[PositivePlane, bool]: The plane and whether it is a heuristic approximation.

    Raises:
        ExactnessError: Float entries without a heuristic denominator.
    """
    has_floats = any(isinstance(x, float) for row in document.basis for x in row)
    if has_floats:
        if heuristic_denominator is None:
            raise ExactnessError(
                "plane has float entries; pass a heuristic denominator to approximate it"
            )
        rows = [[float(x) for x in row] for row in document.basis]
        return (
            plane_from_floats(rows, heuristic_denominator, lattice, document.oriented),
            True,
        )
    return plane_from_basis(document.basis, lattice=lattice, oriented=document.oriented), False


def load_plane(
    reference: Union[str, Path],
    lattice: Optional[Lattice] = None,
    heuristic_denominator: Optional[int] = None,
) -> Tuple[PositivePlane, bool]:
    """Resolve a plane given as a registry name or as a path to a plane JSON file."""
    if str(reference) in _planes_registry() and not Path(reference).is_file():
        return load_named_plane(str(reference), lattice), False
    with open(reference, "r", encoding="utf-8") as file:
        document = PlaneFile.model_validate(json.load(file))
    return plane_from_document(document, lattice, heuristic_denominator)
